#include "bimsynth/render.h"

#include <algorithm>
#include <cmath>

#include "bimsynth/error.h"
#include "bimsynth/parallel.h"

namespace bimsynth {

double shade_channel(double albedo, double ambient, double sun_intensity,
                     double n_dot_l, bool visible) {
  const double direct =
      visible ? sun_intensity * std::max(0.0, n_dot_l) * albedo : 0.0;
  return std::clamp(ambient * albedo + direct, 0.0, 1.0);
}

std::uint8_t to_8bit(double v) {
  return static_cast<std::uint8_t>(
      std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
}

double srgb_encode(double linear) {
  if (linear <= 0.0031308) return 12.92 * linear;
  return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double lattice_value(long long ix, long long iy, long long iz,
                     std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(ix));
  h = splitmix64(h ^ static_cast<std::uint64_t>(iy));
  h = splitmix64(h ^ static_cast<std::uint64_t>(iz));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double value_noise(const Vec3& p, std::uint64_t seed) {
  const double fx = std::floor(p.x()), fy = std::floor(p.y()),
               fz = std::floor(p.z());
  const auto ix = static_cast<long long>(fx);
  const auto iy = static_cast<long long>(fy);
  const auto iz = static_cast<long long>(fz);
  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  const double tx = smooth(p.x() - fx), ty = smooth(p.y() - fy),
               tz = smooth(p.z() - fz);
  double acc = 0.0;
  for (int dz = 0; dz < 2; ++dz) {
    for (int dy = 0; dy < 2; ++dy) {
      for (int dx = 0; dx < 2; ++dx) {
        const double w = (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty) *
                         (dz ? tz : 1 - tz);
        acc += w * lattice_value(ix + dx, iy + dy, iz + dz, seed);
      }
    }
  }
  return acc;
}

}  // namespace

double texture_factor(const Material& material, const Vec3& p,
                      std::uint64_t seed) {
  switch (material.texture) {
    case TextureKind::kNone:
      return 1.0;
    case TextureKind::kChecker: {
      // Seeded sub-cell offset keeps cell boundaries off the axis-aligned
      // planes most building faces lie on.
      const double shift = 0.5 + 0.25 * lattice_value(0, 0, 0, seed);
      const Vec3 q = p / material.texture_scale + Vec3::Constant(shift);
      const long long parity = static_cast<long long>(std::floor(q.x())) +
                               static_cast<long long>(std::floor(q.y())) +
                               static_cast<long long>(std::floor(q.z()));
      return (parity & 1) ? 0.7 : 1.0;
    }
    case TextureKind::kNoise: {
      const Vec3 q = p / material.texture_scale;
      const double n = 0.65 * value_noise(q, seed) +
                       0.35 * value_noise(2.0 * q, seed + 1);
      return 0.7 + 0.3 * n;
    }
  }
  return 1.0;
}

Vec3 sky_color(const SceneState& state) {
  const double level =
      std::clamp(0.35 + state.ambient + 0.4 * state.sun_intensity, 0.0, 1.0);
  return Vec3(0.55, 0.70, 0.90) * level;
}

Renderer::Renderer(const SemanticScene& scene)
    : scene_(scene), bvh_(TriangleBvh::from_scene(scene)) {}

Image Renderer::photoreal(const CameraPose& pose, const SceneState& state,
                          int width, int height,
                          const RenderOptions& opts) const {
  const PinholeCamera cam(pose, width, height);
  const Vec3 to_light = -state.sun_direction;
  auto encode = [&](double v) {
    return to_8bit(opts.srgb ? srgb_encode(v) : v);
  };
  const Vec3 sky = sky_color(state);
  const Rgb sky_rgb{encode(sky.x()), encode(sky.y()), encode(sky.z())};

  Image img(width, height);
  parallel_for(height, opts.workers, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < width; ++x) {
      const Ray ray = cam.pixel_ray(x, y);
      const auto hit = bvh_.nearest(ray);
      if (!hit) {
        img.set(x, y, sky_rgb);
        continue;
      }
      const SemanticObject& obj = scene_.objects[hit->object];
      const auto [a, b, c] = obj.mesh.triangle(hit->face);
      Vec3 n = triangle_normal(a, b, c);
      if (n.dot(ray.direction) > 0.0) n = -n;
      const Vec3 p = ray.origin + hit->t * ray.direction;
      const double n_dot_l = n.dot(to_light);

      bool visible = false;
      if (n_dot_l > 0.0 && state.sun_intensity > 0.0) {
        const double eps = 1e-7 * (1.0 + p.cwiseAbs().maxCoeff());
        const Ray shadow{p + eps * n, to_light};
        visible = !bvh_.occluded(shadow, eps, TriangleBvh::kInfinity);
      }
      const double tex = texture_factor(obj.material, p, scene_.seed);
      Rgb out;
      std::uint8_t* channels[3] = {&out.r, &out.g, &out.b};
      for (int k = 0; k < 3; ++k) {
        const double albedo = std::clamp(obj.material.albedo[k] * tex, 0.0, 1.0);
        *channels[k] = encode(shade_channel(albedo, state.ambient,
                                            state.sun_intensity, n_dot_l,
                                            visible));
      }
      img.set(x, y, out);
    }
  });
  return img;
}

LabelRender Renderer::label(const CameraPose& pose, int width, int height,
                            const RenderOptions& opts) const {
  const PinholeCamera cam(pose, width, height);
  LabelRender out{Image(width, height), IdBuffer(width, height)};
  parallel_for(height, opts.workers, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < width; ++x) {
      const auto hit = bvh_.nearest(cam.pixel_ray(x, y));
      const ClassId c =
          hit ? scene_.objects[hit->object].class_id : ClassId::kBackground;
      out.ids.set(x, y, c);
      out.image.set(x, y, scene_.palette.color(c));
    }
  });
  return out;
}

Image render_photoreal(const SemanticScene& scene, const CameraPose& pose,
                       const SceneState& state, int width, int height,
                       const RenderOptions& opts) {
  return Renderer(scene).photoreal(pose, state, width, height, opts);
}

LabelRender render_label(const SemanticScene& scene, const CameraPose& pose,
                         int width, int height, const RenderOptions& opts) {
  return Renderer(scene).label(pose, width, height, opts);
}

void render_batch(const SemanticScene& scene,
                  const std::vector<CameraPose>& poses,
                  const std::vector<SceneState>& states, int width, int height,
                  const RenderSink& sink, const RenderOptions& opts) {
  if (poses.empty()) {
    throw Error(ErrorCode::kEmptyCameraRig, "empty camera rig");
  }
  if (states.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no photoreal scene states");
  }
  const Renderer renderer(scene);
  for (const CameraPose& pose : poses) {
    LabelRender label = renderer.label(pose, width, height, opts);
    for (const SceneState& state : states) {
      RenderPair pair;
      pair.photoreal = renderer.photoreal(pose, state, width, height, opts);
      pair.label = label.image;
      pair.id_buffer = label.ids;
      pair.view_id = pose.view_id;
      pair.state_id = state.id;
      sink(pair);
    }
  }
}

}  // namespace bimsynth
