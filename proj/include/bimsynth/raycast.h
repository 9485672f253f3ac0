#ifndef BIMSYNTH_RAYCAST_H_
#define BIMSYNTH_RAYCAST_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "bimsynth/camera.h"
#include "bimsynth/mesh.h"
#include "bimsynth/scene.h"

namespace bimsynth {

struct TriangleHit {
  double t = 0.0;
  double u = 0.0;  // barycentric weight of vertex b
  double v = 0.0;  // barycentric weight of vertex c
};

// Moller-Trumbore, two-sided, edges inclusive. Accepts t in (t_min, t_max).
std::optional<TriangleHit> intersect_triangle(const Ray& ray, const Vec3& a,
                                              const Vec3& b, const Vec3& c,
                                              double t_min, double t_max);

struct Hit {
  double t = 0.0;
  std::uint32_t object = 0;     // index into the source object list
  std::uint32_t primitive = 0;  // global triangle index (object-major)
  std::uint32_t face = 0;       // triangle index within its object
};

// Bounding volume hierarchy over the triangles of several meshes.
//
// Nearest-hit queries resolve to the lexicographically smallest
// (t, primitive); primitives are numbered object-major, so equal-distance
// ties go to the lowest object index regardless of traversal order.
class TriangleBvh {
 public:
  explicit TriangleBvh(const std::vector<const TriMesh*>& meshes);
  static TriangleBvh from_scene(const SemanticScene& scene);

  std::optional<Hit> nearest(const Ray& ray, double t_min = 1e-9,
                             double t_max = kInfinity) const;
  bool occluded(const Ray& ray, double t_min, double t_max) const;

  std::size_t primitive_count() const { return tris_.size(); }

  static constexpr double kInfinity = 1e300;

 private:
  struct Tri {
    Vec3 a, b, c;
    std::uint32_t object;
    std::uint32_t face;
  };
  struct Node {
    Eigen::Vector3d lo, hi;
    std::uint32_t first = 0;  // first primitive (leaf) or left child (inner)
    std::uint32_t count = 0;  // > 0 marks a leaf
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);

  std::vector<Tri> tris_;
  std::vector<std::uint32_t> order_;  // leaf slots -> primitive ids
  std::vector<Node> nodes_;
};

}  // namespace bimsynth

#endif  // BIMSYNTH_RAYCAST_H_
