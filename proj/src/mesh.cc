#include "bimsynth/mesh.h"

#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Geometry>

#include "bimsynth/error.h"
#include "text_io.h"

namespace bimsynth {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
  return (b - a).cross(c - a).normalized();
}

void validate_mesh(const TriMesh& mesh, const std::string& what) {
  if (mesh.faces.empty()) {
    throw Error(ErrorCode::kDegenerateGeometry, what + ": mesh has no triangles");
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    for (std::uint32_t idx : mesh.faces[f]) {
      if (idx >= mesh.vertices.size()) {
        throw Error(ErrorCode::kDegenerateGeometry,
                    what + ": face " + std::to_string(f) +
                        " references missing vertex " + std::to_string(idx));
      }
    }
    const auto [a, b, c] = mesh.triangle(f);
    if (!(triangle_area(a, b, c) > kMinTriangleArea)) {
      throw Error(ErrorCode::kDegenerateGeometry,
                  what + ": triangle " + std::to_string(f) + " has zero area");
    }
  }
}

TriMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "missing mesh file " + path.string());
  }
  text::LineReader reader(in, path.string());
  TriMesh mesh;
  text::Line line;
  while (reader.next(line)) {
    if (line.keyword() == "v") {
      if (line.size() < 4) reader.fail(line, "vertex needs 3 coordinates");
      mesh.vertices.emplace_back(text::to_double(reader, line, 1),
                                 text::to_double(reader, line, 2),
                                 text::to_double(reader, line, 3));
    } else if (line.keyword() == "f") {
      if (line.size() < 4) reader.fail(line, "face needs at least 3 vertices");
      std::vector<std::uint32_t> poly;
      for (std::size_t i = 1; i < line.size(); ++i) {
        const std::string& tok = line.tokens[i];
        const std::string head = tok.substr(0, tok.find('/'));
        long long idx = 0;
        try {
          std::size_t used = 0;
          idx = std::stoll(head, &used);
          if (used != head.size()) throw std::invalid_argument(head);
        } catch (const std::exception&) {
          reader.fail(line, "bad face index '" + tok + "'");
        }
        if (idx < 0) idx = static_cast<long long>(mesh.vertices.size()) + idx + 1;
        if (idx < 1 || idx > static_cast<long long>(mesh.vertices.size())) {
          reader.fail(line, "face index out of range");
        }
        poly.push_back(static_cast<std::uint32_t>(idx - 1));
      }
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        mesh.faces.push_back({poly[0], poly[i], poly[i + 1]});
      }
    }
  }
  return mesh;
}

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const Vec3& v : mesh.vertices) {
    out << "v " << text::format_double(v.x()) << ' '
        << text::format_double(v.y()) << ' ' << text::format_double(v.z())
        << '\n';
  }
  for (const auto& f : mesh.faces) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
  text::write_file(path, out.str());
}

}  // namespace bimsynth
