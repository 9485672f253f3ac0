#ifndef BIMSYNTH_RENDER_H_
#define BIMSYNTH_RENDER_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "bimsynth/camera.h"
#include "bimsynth/image.h"
#include "bimsynth/raycast.h"
#include "bimsynth/scene.h"

namespace bimsynth {

struct RenderOptions {
  bool srgb = false;  // encode shaded values with the sRGB transfer curve
  int workers = 1;    // row-parallel workers; output does not depend on it
};

// Photoreal and label renders of one (view, state).
struct RenderPair {
  Image photoreal;
  Image label;
  IdBuffer id_buffer;
  int view_id = 0;
  int state_id = 0;
};

struct LabelRender {
  Image image;
  IdBuffer ids;
};

// Lambertian term for one channel:
//   clamp(ambient*albedo + intensity*max(0, n.l)*albedo*visibility, 0, 1)
double shade_channel(double albedo, double ambient, double sun_intensity,
                     double n_dot_l, bool visible);

// [0,1] -> 0..255 with round-half-up.
std::uint8_t to_8bit(double v);
double srgb_encode(double linear);

// Multiplicative albedo modulation for procedural textures, in (0, 1].
double texture_factor(const Material& material, const Vec3& p,
                      std::uint64_t seed);

// Sky color shown where no object is hit in photoreal renders.
Vec3 sky_color(const SceneState& state);

// Ray-cast renderer over one immutable scene. Safe for concurrent use.
class Renderer {
 public:
  explicit Renderer(const SemanticScene& scene);

  const SemanticScene& scene() const { return scene_; }
  const TriangleBvh& bvh() const { return bvh_; }

  // One primary ray per pixel center; hard shadows from a single shadow ray
  // toward the sun; surfaces are two-sided.
  Image photoreal(const CameraPose& pose, const SceneState& state, int width,
                  int height, const RenderOptions& opts = {}) const;

  // Flat palette colors of the nearest object's class; no lighting, no
  // anti-aliasing. Pixels that hit nothing are background.
  LabelRender label(const CameraPose& pose, int width, int height,
                    const RenderOptions& opts = {}) const;

 private:
  const SemanticScene& scene_;
  TriangleBvh bvh_;
};

Image render_photoreal(const SemanticScene& scene, const CameraPose& pose,
                       const SceneState& state, int width, int height,
                       const RenderOptions& opts = {});
LabelRender render_label(const SemanticScene& scene, const CameraPose& pose,
                         int width, int height,
                         const RenderOptions& opts = {});

using RenderSink = std::function<void(const RenderPair&)>;

// Emits |poses| x |states| pairs, view-major then state order. The label pass
// runs once per view and is shared by that view's pairs.
// Throws kEmptyCameraRig for no poses and kInvalidArgument for no states.
void render_batch(const SemanticScene& scene,
                  const std::vector<CameraPose>& poses,
                  const std::vector<SceneState>& states, int width, int height,
                  const RenderSink& sink, const RenderOptions& opts = {});

}  // namespace bimsynth

#endif  // BIMSYNTH_RENDER_H_
