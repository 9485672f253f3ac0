#ifndef BIMSYNTH_MESH_BLEND_H_
#define BIMSYNTH_MESH_BLEND_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "bimsynth/camera.h"
#include "bimsynth/image.h"
#include "bimsynth/mesh.h"
#include "bimsynth/palette.h"
#include "bimsynth/raycast.h"
#include "bimsynth/scene.h"

namespace bimsynth {

inline constexpr double kDefaultTexelsPerMeter = 64.0;

// All scene objects concatenated into one mesh, object-major. When
// `triangle_classes` is given it receives the class of every triangle.
TriMesh merge_scene_meshes(const SemanticScene& scene,
                           std::vector<ClassId>* triangle_classes = nullptr);

// Barycentric texel grid over every triangle. A triangle whose longest edge is
// L meters is split into n = max(1, ceil(L * texels_per_meter)) steps per
// edge, giving n^2 congruent sub-triangles; each is one texel sampled at its
// centroid.
struct TexelLayout {
  double texels_per_meter = kDefaultTexelsPerMeter;
  std::vector<std::uint32_t> subdivisions;  // n per triangle
  std::vector<std::size_t> offsets;         // first texel per triangle, +end
  std::vector<Vec3> centers;
  std::vector<std::uint32_t> triangle_of;   // owning triangle per texel

  std::size_t texel_count() const { return centers.size(); }
  std::size_t texels_in(std::size_t tri) const {
    return offsets[tri + 1] - offsets[tri];
  }
};

TexelLayout make_texel_layout(const TriMesh& mesh,
                              double texels_per_meter = kDefaultTexelsPerMeter);

struct TexelVote {
  std::uint32_t texel = 0;
  ClassId class_id = ClassId::kBackground;
  double weight = 0.0;  // cosine between surface normal and view direction
};

using ViewObservations = std::vector<TexelVote>;

// Votes from one labeled view. A texel votes when its center projects inside
// the label map, faces the camera (cos > 0 with the triangle's winding
// normal), and the segment from its center to the camera is unobstructed.
// `bvh` must be built over `mesh` alone.
ViewObservations project_view(const TriMesh& mesh, const TexelLayout& layout,
                              const TriangleBvh& bvh, const CameraPose& pose,
                              const LabelMap& labels);

struct SemanticMesh {
  TriMesh mesh;
  TexelLayout layout;
  std::vector<std::array<double, kNumClasses>> weight;  // per texel
  std::vector<std::array<std::uint32_t, kNumClasses>> votes;
  std::vector<ClassId> fused;

  std::uint32_t observation_count(std::size_t texel) const;
};

// Per-texel weighted majority: highest summed weight, then most votes, then
// lowest ClassId. Texels nobody observed are background.
// Throws kEmptyInput when `views` is empty.
SemanticMesh fuse(const TriMesh& mesh, const TexelLayout& layout,
                  std::span<const ViewObservations> views);

// Class of the winning entry of one texel's histogram.
ClassId fused_class(const std::array<double, kNumClasses>& weight,
                    const std::array<std::uint32_t, kNumClasses>& votes);

struct BlendScore {
  std::size_t observed_texels = 0;
  double fused_accuracy = 0.0;        // over observed texels
  double single_view_accuracy = 0.0;  // mean over views of vote accuracy
};

BlendScore score_blend(const SemanticMesh& sm,
                       std::span<const ViewObservations> views,
                       const std::vector<ClassId>& triangle_truth);

// Writes <dir>/<stem>.obj (geometry), <dir>/<stem>_texels.png (one row per
// triangle holding its texels' class colors, padded with background) and
// <dir>/<stem>.txt (layout parameters).
void export_semantic_mesh(const SemanticMesh& sm, const ClassPalette& palette,
                          const std::filesystem::path& dir,
                          const std::string& stem = "semantic_mesh");

struct ImportedSemanticMesh {
  TriMesh mesh;
  TexelLayout layout;
  std::vector<ClassId> fused;
};

ImportedSemanticMesh import_semantic_mesh(const std::filesystem::path& sidecar,
                                          const ClassPalette& palette);

}  // namespace bimsynth

#endif  // BIMSYNTH_MESH_BLEND_H_
