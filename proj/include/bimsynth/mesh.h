#ifndef BIMSYNTH_MESH_H_
#define BIMSYNTH_MESH_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace bimsynth {

using Vec3 = Eigen::Vector3d;

// Indexed triangle list; coordinates in meters.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> faces;

  std::size_t triangle_count() const { return faces.size(); }
  std::array<Vec3, 3> triangle(std::size_t f) const {
    return {vertices[faces[f][0]], vertices[faces[f][1]],
            vertices[faces[f][2]]};
  }

  friend bool operator==(const TriMesh&, const TriMesh&) = default;
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

// Unit normal following the right-hand rule over (a, b, c).
Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c);

// Throws kDegenerateGeometry for empty meshes, out-of-range indices, or
// triangles with area <= kMinTriangleArea.
inline constexpr double kMinTriangleArea = 1e-12;
void validate_mesh(const TriMesh& mesh, const std::string& what);

// ASCII mesh files use the OBJ vertex/face subset: "v x y z" and "f i j k"
// (1-based; "i/t/n" forms accepted, polygons fan-triangulated). Other records
// are ignored.
TriMesh read_mesh(const std::filesystem::path& path);
void write_mesh(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace bimsynth

#endif  // BIMSYNTH_MESH_H_
