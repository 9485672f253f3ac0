#ifndef BIMSYNTH_TESTS_TEST_UTIL_H_
#define BIMSYNTH_TESTS_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "bimsynth/mesh.h"
#include "bimsynth/scene.h"

namespace bimsynth::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "bimsynth_";
    if (info) name += std::string(info->test_suite_name()) + "_" + info->name();
    for (char& c : name) {
      if (c == '/') c = '_';
    }
    static int serial = 0;
    name += "_" + std::to_string(serial++);
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

// Relative path -> file bytes for every regular file under `root`.
inline std::map<std::string, std::string> read_tree(
    const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[std::filesystem::relative(e.path(), root).generic_string()] = ss.str();
  }
  return out;
}

// Axis-aligned box with outward winding.
inline TriMesh box_mesh(const Vec3& lo, const Vec3& hi) {
  TriMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(),
                            i & 4 ? hi.z() : lo.z());
  }
  m.faces = {{0, 2, 3}, {0, 3, 1}, {4, 5, 7}, {4, 7, 6}, {0, 1, 5}, {0, 5, 4},
             {2, 6, 7}, {2, 7, 3}, {0, 4, 6}, {0, 6, 2}, {1, 3, 7}, {1, 7, 5}};
  return m;
}

// Square in the plane x = `x`, facing +x, spanning [y0,y1] x [z0,z1].
inline TriMesh quad_x(double x, double y0, double y1, double z0, double z1) {
  TriMesh m;
  m.vertices = {{x, y0, z0}, {x, y1, z0}, {x, y1, z1}, {x, y0, z1}};
  m.faces = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

inline SemanticObject make_object(std::string name, ClassId c, TriMesh mesh,
                                  Vec3 albedo = Vec3(0.8, 0.8, 0.8)) {
  SemanticObject o;
  o.name = std::move(name);
  o.class_id = c;
  o.mesh = std::move(mesh);
  o.material.albedo = albedo;
  return o;
}

// Small scene: a wall slab, a window in front of it, a roof box above and a
// column standing in front; camera rigs look at the origin from +x.
inline SemanticScene small_scene() {
  SemanticScene s;
  s.objects.push_back(make_object("wall", ClassId::kWall,
                                  box_mesh({-0.2, -3, 0}, {0, 3, 3})));
  s.objects.push_back(make_object("window", ClassId::kWindow,
                                  box_mesh({0, -1, 1}, {0.05, 1, 2}),
                                  Vec3(0.2, 0.3, 0.5)));
  s.objects.push_back(make_object("roof", ClassId::kRoof,
                                  box_mesh({-0.5, -3.2, 3}, {0.4, 3.2, 3.4}),
                                  Vec3(0.6, 0.2, 0.1)));
  s.objects.push_back(make_object("column", ClassId::kColumn,
                                  box_mesh({1.5, 1.6, 0}, {1.8, 1.9, 3}),
                                  Vec3(0.9, 0.9, 0.9)));
  SceneState st;
  st.id = 0;
  st.sun_direction = Vec3(-1, 0.3, -1).normalized();
  st.sun_intensity = 0.9;
  st.ambient = 0.2;
  s.states.push_back(st);
  s.seed = 5;
  return s;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

}  // namespace bimsynth::testing

#endif  // BIMSYNTH_TESTS_TEST_UTIL_H_
