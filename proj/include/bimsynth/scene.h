#ifndef BIMSYNTH_SCENE_H_
#define BIMSYNTH_SCENE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bimsynth/mesh.h"
#include "bimsynth/palette.h"

namespace bimsynth {

enum class TextureKind { kNone, kChecker, kNoise };

struct Material {
  Vec3 albedo = Vec3::Constant(0.8);  // each channel in [0, 1]
  TextureKind texture = TextureKind::kNone;
  double texture_scale = 1.0;  // meters per checker cell / noise lattice cell

  friend bool operator==(const Material&, const Material&) = default;
};

struct SemanticObject {
  std::string name;
  ClassId class_id = ClassId::kWall;
  TriMesh mesh;
  Material material;

  friend bool operator==(const SemanticObject&, const SemanticObject&) = default;
};

// One photoreal lighting configuration. `sun_direction` is the direction the
// sunlight travels, so surfaces are lit from -sun_direction.
struct SceneState {
  int id = 0;
  Vec3 sun_direction = Vec3(0, 0, -1);
  double sun_intensity = 1.0;
  double ambient = 0.2;

  friend bool operator==(const SceneState&, const SceneState&) = default;
};

// Three picked point pairs registering the semantic model onto the
// photoreal model.
struct PointCorrespondences {
  std::array<Vec3, 3> src;
  std::array<Vec3, 3> dst;

  friend bool operator==(const PointCorrespondences&,
                         const PointCorrespondences&) = default;
};

struct SemanticScene {
  std::vector<SemanticObject> objects;
  std::vector<SceneState> states;
  ClassPalette palette = default_palette();
  std::uint64_t seed = 0;  // procedural texture seed
  std::optional<PointCorrespondences> alignment;

  std::size_t triangle_count() const;

  friend bool operator==(const SemanticScene&, const SemanticScene&) = default;
};

// Checks every SemanticScene invariant; throws Error on violation.
void validate_scene(const SemanticScene& scene);

// Parses a scene manifest (grammar in docs/scene_format.md). Mesh paths are
// relative to the manifest's directory. Sun directions are normalized.
SemanticScene load_scene(const std::filesystem::path& manifest_path);
SemanticScene parse_scene(const std::string& text,
                          const std::filesystem::path& base_dir,
                          const std::string& source_name = "<scene>");

// Writes the manifest and one mesh file per object under
// `<manifest dir>/meshes/`.
void save_scene(const SemanticScene& scene,
                const std::filesystem::path& manifest_path);

// `count` lighting states sweeping the sun from morning to evening, with
// ambient levels cycling through clear/hazy/overcast. Ids are 0..count-1.
std::vector<SceneState> daylight_states(int count);

}  // namespace bimsynth

#endif  // BIMSYNTH_SCENE_H_
