#include "bimsynth/scene.h"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "bimsynth/error.h"
#include "text_io.h"

namespace bimsynth {

std::size_t SemanticScene::triangle_count() const {
  std::size_t n = 0;
  for (const auto& obj : objects) n += obj.mesh.triangle_count();
  return n;
}

void validate_scene(const SemanticScene& scene) {
  if (scene.objects.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "scene has no objects");
  }
  if (scene.states.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "scene has no lighting states");
  }
  std::set<std::string> names;
  for (const auto& obj : scene.objects) {
    if (obj.name.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "object without a name");
    }
    if (!names.insert(obj.name).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate object name '" + obj.name + "'");
    }
    validate_mesh(obj.mesh, "object '" + obj.name + "'");
    for (int c = 0; c < 3; ++c) {
      const double a = obj.material.albedo[c];
      if (!(a >= 0.0 && a <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "object '" + obj.name + "': albedo outside [0,1]");
      }
    }
    if (obj.material.texture != TextureKind::kNone &&
        !(obj.material.texture_scale > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "object '" + obj.name + "': texture scale must be positive");
    }
  }
  std::set<int> ids;
  for (const auto& st : scene.states) {
    if (!ids.insert(st.id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate state id " + std::to_string(st.id));
    }
    if (std::abs(st.sun_direction.norm() - 1.0) > 1e-9) {
      throw Error(ErrorCode::kInvalidArgument,
                  "state " + std::to_string(st.id) +
                      ": sun direction is not a unit vector");
    }
    if (!(st.sun_intensity >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "state " + std::to_string(st.id) + ": negative sun intensity");
    }
    if (!(st.ambient >= 0.0 && st.ambient <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "state " + std::to_string(st.id) + ": ambient outside [0,1]");
    }
  }
}

namespace {

Vec3 read_vec3(const text::LineReader& r, const text::Line& line,
               std::size_t first) {
  return {text::to_double(r, line, first), text::to_double(r, line, first + 1),
          text::to_double(r, line, first + 2)};
}

std::array<Vec3, 3> read_triple(const text::LineReader& r,
                                const text::Line& line) {
  text::expect_arity(r, line, 10);
  return {read_vec3(r, line, 1), read_vec3(r, line, 4), read_vec3(r, line, 7)};
}

std::uint8_t read_channel(const text::LineReader& r, const text::Line& line,
                          std::size_t i) {
  const long long v = text::to_int(r, line, i);
  if (v < 0 || v > 255) r.fail(line, "color channel outside 0..255");
  return static_cast<std::uint8_t>(v);
}

SemanticObject parse_object(text::LineReader& r, const text::Line& header,
                            const std::filesystem::path& base_dir) {
  text::expect_arity(r, header, 2);
  SemanticObject obj;
  obj.name = header.tokens[1];
  bool has_class = false;
  bool has_mesh = false;
  text::Line line;
  while (r.next(line)) {
    const std::string& key = line.keyword();
    if (key == "end") {
      if (!has_class) r.fail(line, "object '" + obj.name + "' has no class");
      if (!has_mesh) r.fail(line, "object '" + obj.name + "' has no mesh");
      return obj;
    }
    if (key == "class") {
      text::expect_arity(r, line, 2);
      obj.class_id = parse_class_name(line.tokens[1]);
      has_class = true;
    } else if (key == "mesh") {
      text::expect_arity(r, line, 2);
      obj.mesh = read_mesh(base_dir / line.tokens[1]);
      has_mesh = true;
    } else if (key == "albedo") {
      text::expect_arity(r, line, 4);
      obj.material.albedo = read_vec3(r, line, 1);
    } else if (key == "texture") {
      if (line.size() < 2) r.fail(line, "texture needs a kind");
      const std::string& kind = line.tokens[1];
      if (kind == "none") {
        text::expect_arity(r, line, 2);
        obj.material.texture = TextureKind::kNone;
      } else if (kind == "checker" || kind == "noise") {
        text::expect_arity(r, line, 3);
        obj.material.texture =
            kind == "checker" ? TextureKind::kChecker : TextureKind::kNoise;
        obj.material.texture_scale = text::to_double(r, line, 2);
      } else {
        r.fail(line, "unknown texture '" + kind + "'");
      }
    } else {
      r.fail(line, "unknown object key '" + key + "'");
    }
  }
  throw Error(ErrorCode::kParse,
              r.source() + ": unterminated object '" + obj.name + "'");
}

SceneState parse_state(text::LineReader& r, const text::Line& header) {
  text::expect_arity(r, header, 2);
  SceneState st;
  st.id = static_cast<int>(text::to_int(r, header, 1));
  text::Line line;
  while (r.next(line)) {
    const std::string& key = line.keyword();
    if (key == "end") return st;
    if (key == "sun_direction") {
      text::expect_arity(r, line, 4);
      const Vec3 d = read_vec3(r, line, 1);
      if (!(d.norm() > 0.0)) r.fail(line, "sun direction must be nonzero");
      // Already-unit vectors are kept bit-exact so save/load round-trips.
      st.sun_direction =
          std::abs(d.norm() - 1.0) <= 1e-12 ? d : Vec3(d.normalized());
    } else if (key == "sun_intensity") {
      text::expect_arity(r, line, 2);
      st.sun_intensity = text::to_double(r, line, 1);
    } else if (key == "ambient") {
      text::expect_arity(r, line, 2);
      st.ambient = text::to_double(r, line, 1);
    } else {
      r.fail(line, "unknown state key '" + key + "'");
    }
  }
  throw Error(ErrorCode::kParse, r.source() + ": unterminated state block");
}

PointCorrespondences parse_alignment(text::LineReader& r) {
  PointCorrespondences pc;
  bool has_src = false, has_dst = false;
  text::Line line;
  while (r.next(line)) {
    const std::string& key = line.keyword();
    if (key == "end") {
      if (!has_src || !has_dst) r.fail(line, "align block needs src and dst");
      return pc;
    }
    if (key == "src") {
      pc.src = read_triple(r, line);
      has_src = true;
    } else if (key == "dst") {
      pc.dst = read_triple(r, line);
      has_dst = true;
    } else {
      r.fail(line, "unknown align key '" + key + "'");
    }
  }
  throw Error(ErrorCode::kParse, r.source() + ": unterminated align block");
}

}  // namespace

SemanticScene parse_scene(const std::string& content,
                          const std::filesystem::path& base_dir,
                          const std::string& source_name) {
  std::istringstream in(content);
  text::LineReader r(in, source_name);
  SemanticScene scene;
  std::array<Rgb, kNumClasses> colors = default_palette().colors();
  text::Line line;
  while (r.next(line)) {
    const std::string& key = line.keyword();
    if (key == "object") {
      scene.objects.push_back(parse_object(r, line, base_dir));
    } else if (key == "state") {
      scene.states.push_back(parse_state(r, line));
    } else if (key == "align") {
      text::expect_arity(r, line, 1);
      scene.alignment = parse_alignment(r);
    } else if (key == "palette") {
      text::expect_arity(r, line, 5);
      const ClassId c = parse_class_name(line.tokens[1]);
      colors[index_of(c)] = {read_channel(r, line, 2), read_channel(r, line, 3),
                             read_channel(r, line, 4)};
    } else if (key == "seed") {
      text::expect_arity(r, line, 2);
      const long long s = text::to_int(r, line, 1);
      if (s < 0) r.fail(line, "seed must be non-negative");
      scene.seed = static_cast<std::uint64_t>(s);
    } else {
      r.fail(line, "unknown top-level key '" + key + "'");
    }
  }
  scene.palette = ClassPalette(colors);
  validate_scene(scene);
  return scene;
}

SemanticScene load_scene(const std::filesystem::path& manifest_path) {
  const std::string content = text::read_file(manifest_path);
  return parse_scene(content, manifest_path.parent_path(),
                     manifest_path.string());
}

namespace {

std::string vec_text(const Vec3& v) {
  return text::format_double(v.x()) + " " + text::format_double(v.y()) + " " +
         text::format_double(v.z());
}

}  // namespace

void save_scene(const SemanticScene& scene,
                const std::filesystem::path& manifest_path) {
  validate_scene(scene);
  const auto dir = manifest_path.parent_path();
  std::filesystem::create_directories(dir / "meshes");
  std::ostringstream out;
  out << "seed " << scene.seed << '\n';
  for (ClassId c : kAllClasses) {
    const Rgb rgb = scene.palette.color(c);
    out << "palette " << class_name(c) << ' ' << int{rgb.r} << ' ' << int{rgb.g}
        << ' ' << int{rgb.b} << '\n';
  }
  if (scene.alignment) {
    const auto& a = *scene.alignment;
    out << "align\n  src " << vec_text(a.src[0]) << ' ' << vec_text(a.src[1])
        << ' ' << vec_text(a.src[2]) << "\n  dst " << vec_text(a.dst[0]) << ' '
        << vec_text(a.dst[1]) << ' ' << vec_text(a.dst[2]) << "\nend\n";
  }
  for (const auto& obj : scene.objects) {
    const std::string mesh_rel = "meshes/" + obj.name + ".obj";
    write_mesh(obj.mesh, dir / mesh_rel);
    out << "\nobject " << obj.name << "\n  class " << class_name(obj.class_id)
        << "\n  mesh " << mesh_rel << "\n  albedo "
        << vec_text(obj.material.albedo) << "\n  texture ";
    switch (obj.material.texture) {
      case TextureKind::kNone: out << "none"; break;
      case TextureKind::kChecker:
        out << "checker " << text::format_double(obj.material.texture_scale);
        break;
      case TextureKind::kNoise:
        out << "noise " << text::format_double(obj.material.texture_scale);
        break;
    }
    out << "\nend\n";
  }
  for (const auto& st : scene.states) {
    out << "\nstate " << st.id << "\n  sun_direction "
        << vec_text(st.sun_direction) << "\n  sun_intensity "
        << text::format_double(st.sun_intensity) << "\n  ambient "
        << text::format_double(st.ambient) << "\nend\n";
  }
  text::write_file(manifest_path, out.str());
}

std::vector<SceneState> daylight_states(int count) {
  if (count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one state");
  }
  constexpr double kPi = std::numbers::pi;
  constexpr std::array<double, 3> kAmbient = {0.15, 0.25, 0.4};
  constexpr std::array<double, 3> kSunScale = {1.0, 0.75, 0.35};
  std::vector<SceneState> states;
  states.reserve(count);
  for (int i = 0; i < count; ++i) {
    // Fraction of the daylight window, 0 = sunrise side, 1 = sunset side.
    const double day = (i + 0.5) / count;
    const double azimuth = kPi * (0.5 - day) - kPi / 2;  // east, south, west
    const double elevation = (10.0 + 55.0 * std::sin(kPi * day)) * kPi / 180.0;
    const Vec3 toward_sun(std::cos(elevation) * std::cos(azimuth),
                          std::cos(elevation) * std::sin(azimuth),
                          std::sin(elevation));
    SceneState st;
    st.id = i;
    st.sun_direction = (-toward_sun).normalized();
    st.ambient = kAmbient[i % 3];
    st.sun_intensity = kSunScale[i % 3] * (0.5 + 0.5 * std::sin(elevation));
    states.push_back(st);
  }
  return states;
}

}  // namespace bimsynth
