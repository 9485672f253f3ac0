#include <gtest/gtest.h>

#include <random>

#include "bimsynth/error.h"
#include "bimsynth/raycast.h"
#include "bimsynth/render.h"
#include "test_util.h"

namespace bimsynth {
namespace {

using testing::make_object;
using testing::quad_x;

CameraPose looking_down_minus_x(double dist = 10.0) {
  CameraPose p;
  p.position = Vec3(dist, 0, 0);
  p.look_at = Vec3(0, 0, 0);
  return p;
}

SemanticScene single_quad(ClassId c, Vec3 albedo, Vec3 sun_direction,
                          double ambient, double intensity) {
  SemanticScene s;
  s.objects.push_back(make_object("q", c, quad_x(0, -5, 5, -5, 5), albedo));
  SceneState st;
  st.sun_direction = sun_direction.normalized();
  st.ambient = ambient;
  st.sun_intensity = intensity;
  s.states.push_back(st);
  return s;
}

TEST(Shading, HeadOnFullLightIsWhite) {
  EXPECT_DOUBLE_EQ(shade_channel(1.0, 0.0, 1.0, 1.0, true), 1.0);
  EXPECT_EQ(to_8bit(1.0), 255);
  const SemanticScene s = single_quad(ClassId::kWall, Vec3(1, 1, 1),
                                      Vec3(-1, 0, 0), 0.0, 1.0);
  const Image img = render_photoreal(s, looking_down_minus_x(), s.states[0], 9, 9);
  EXPECT_EQ(img.at(4, 4), (Rgb{255, 255, 255}));
}

TEST(Shading, ShadowedPointGetsAmbientOnly) {
  EXPECT_DOUBLE_EQ(shade_channel(0.5, 0.2, 1.0, 1.0, false), 0.1);
}

TEST(Shading, HalfCosine) {
  // 0.1 * 0.8 + 1 * 0.5 * 0.8 = 0.48 -> 122.4 -> 122
  EXPECT_NEAR(shade_channel(0.8, 0.1, 1.0, 0.5, true), 0.48, 1e-15);
  const double angle = M_PI / 3;
  const SemanticScene s =
      single_quad(ClassId::kWall, Vec3(0.8, 0.8, 0.8),
                  -Vec3(std::cos(angle), std::sin(angle), 0), 0.1, 1.0);
  const Image img = render_photoreal(s, looking_down_minus_x(), s.states[0], 9, 9);
  EXPECT_EQ(img.at(4, 4), (Rgb{122, 122, 122}));
}

TEST(Shading, RoundHalfUpAndClamp) {
  EXPECT_EQ(to_8bit(0.5), 128);  // 127.5
  EXPECT_EQ(to_8bit(0.0), 0);
  EXPECT_EQ(to_8bit(-0.2), 0);
  EXPECT_EQ(to_8bit(1.7), 255);
  EXPECT_DOUBLE_EQ(shade_channel(1.0, 1.0, 1.0, 1.0, true), 1.0);
}

TEST(Shading, BackFacingLightGivesAmbient) {
  EXPECT_DOUBLE_EQ(shade_channel(0.5, 0.2, 1.0, -0.7, true), 0.1);
}

TEST(Shading, SrgbEncoding) {
  EXPECT_DOUBLE_EQ(srgb_encode(0.0), 0.0);
  EXPECT_NEAR(srgb_encode(1.0), 1.0, 1e-12);
  EXPECT_GT(srgb_encode(0.2), 0.2);
  const SemanticScene s = single_quad(ClassId::kWall, Vec3(0.5, 0.5, 0.5),
                                      Vec3(-1, 0, 0), 0.0, 0.5);
  RenderOptions srgb;
  srgb.srgb = true;
  const Image a = render_photoreal(s, looking_down_minus_x(), s.states[0], 5, 5);
  const Image b =
      render_photoreal(s, looking_down_minus_x(), s.states[0], 5, 5, srgb);
  EXPECT_GT(b.at(2, 2).r, a.at(2, 2).r);
}

TEST(Texture, FactorInRangeAndDeterministic) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-20, 20);
  for (TextureKind k : {TextureKind::kChecker, TextureKind::kNoise}) {
    Material m;
    m.texture = k;
    m.texture_scale = 0.7;
    for (int i = 0; i < 500; ++i) {
      const Vec3 p(u(rng), u(rng), u(rng));
      const double f = texture_factor(m, p, 9);
      EXPECT_GT(f, 0.0);
      EXPECT_LE(f, 1.0);
      EXPECT_EQ(f, texture_factor(m, p, 9));
    }
  }
  Material none;
  EXPECT_EQ(texture_factor(none, Vec3(1, 2, 3), 0), 1.0);
}

TEST(Texture, CheckerVaries) {
  Material m;
  m.texture = TextureKind::kChecker;
  m.texture_scale = 1.0;
  std::set<double> values;
  for (int i = 0; i < 8; ++i) values.insert(texture_factor(m, Vec3(i + 0.5, 0.5, 0.5), 1));
  EXPECT_EQ(values.size(), 2u);
}

TEST(Label, WallPixelIsPureBlueAndMissIsBlack) {
  SemanticScene s = single_quad(ClassId::kWall, Vec3(0.3, 0.3, 0.3),
                                Vec3(-1, 0, 0), 0.2, 1.0);
  CameraPose pose = looking_down_minus_x(3.0);  // quad overfills the center
  const LabelRender lr = render_label(s, pose, 16, 16);
  EXPECT_EQ(lr.image.at(8, 8), (Rgb{0, 0, 255}));
  EXPECT_EQ(lr.ids.at(8, 8), ClassId::kWall);
  pose.look_at = Vec3(3, 5, 0);  // look sideways, away from the quad
  const LabelRender miss = render_label(s, pose, 16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
      EXPECT_EQ(miss.image.at(x, y), (Rgb{0, 0, 0}));
      EXPECT_EQ(miss.ids.at(x, y), ClassId::kBackground);
    }
}

TEST(Label, DecodesToIdBufferEverywhere) {
  const SemanticScene s = testing::small_scene();
  OrbitConfig cfg;
  cfg.radius = 9;
  cfg.center = Vec3(0, 0, 1.5);
  cfg.views_per_ring = 5;
  for (const auto& pose : generate_orbit(cfg)) {
    const LabelRender lr = render_label(s, pose, 40, 30);
    std::set<int> seen;
    for (int y = 0; y < 30; ++y)
      for (int x = 0; x < 40; ++x) {
        const auto c = s.palette.decode(lr.image.at(x, y));
        ASSERT_TRUE(c.has_value());
        ASSERT_EQ(*c, lr.ids.at(x, y));
        seen.insert(index_of(*c));
      }
    EXPECT_GE(seen.size(), 2u);
  }
}

TEST(Raycast, TriangleHitAndMiss) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  const Ray down{Vec3(0.2, 0.3, 5), Vec3(0, 0, -1)};
  const auto hit = intersect_triangle(down, a, b, c, 0, 100);
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->t, 5.0, 1e-12);
  EXPECT_NEAR(hit->u, 0.2, 1e-12);
  EXPECT_NEAR(hit->v, 0.3, 1e-12);
  EXPECT_FALSE(intersect_triangle({Vec3(0.8, 0.8, 5), Vec3(0, 0, -1)}, a, b, c, 0, 100));
  EXPECT_FALSE(intersect_triangle(down, a, b, c, 0, 4.0));  // beyond t_max
  EXPECT_FALSE(intersect_triangle({Vec3(0.2, 0.3, 5), Vec3(1, 0, 0)}, a, b, c, 0, 100));
}

TEST(Raycast, CoplanarTieGoesToLowestObject) {
  SemanticScene s;
  s.objects.push_back(make_object("first", ClassId::kDoor, quad_x(0, -1, 1, -1, 1)));
  s.objects.push_back(make_object("second", ClassId::kWall, quad_x(0, -1, 1, -1, 1)));
  s.states.push_back({});
  const TriangleBvh bvh = TriangleBvh::from_scene(s);
  const auto hit = bvh.nearest({Vec3(5, 0.1, 0.2), Vec3(-1, 0, 0)});
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->object, 0u);
  const LabelRender lr = render_label(s, looking_down_minus_x(5.0), 8, 8);
  EXPECT_EQ(lr.ids.at(4, 4), ClassId::kDoor);
}

// Occlusion correctness: BVH nearest hit equals an all-triangles scan.
TEST(Raycast, BvhMatchesBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-5, 5);
  std::uniform_real_distribution<double> small(-1.5, 1.5);
  std::vector<TriMesh> meshes(6);
  for (auto& m : meshes) {
    for (int t = 0; t < 40; ++t) {
      const Vec3 c(u(rng), u(rng), u(rng));
      const auto base = static_cast<std::uint32_t>(m.vertices.size());
      for (int k = 0; k < 3; ++k) m.vertices.push_back(c + Vec3(small(rng), small(rng), small(rng)));
      m.faces.push_back({base, base + 1, base + 2});
    }
  }
  std::vector<const TriMesh*> ptrs;
  for (const auto& m : meshes) ptrs.push_back(&m);
  const TriangleBvh bvh(ptrs);
  for (int i = 0; i < 3000; ++i) {
    const Ray r{Vec3(u(rng), u(rng), u(rng)) * 2.0, testing::random_unit(rng)};
    std::optional<std::pair<double, std::uint32_t>> best;
    for (std::uint32_t o = 0; o < meshes.size(); ++o) {
      for (std::size_t f = 0; f < meshes[o].faces.size(); ++f) {
        const auto [a, b, c] = meshes[o].triangle(f);
        const auto h = intersect_triangle(r, a, b, c, 1e-9, TriangleBvh::kInfinity);
        if (h && (!best || h->t < best->first)) best = std::make_pair(h->t, o);
      }
    }
    const auto hit = bvh.nearest(r);
    ASSERT_EQ(hit.has_value(), best.has_value());
    if (hit) {
      EXPECT_EQ(hit->t, best->first);
      EXPECT_EQ(hit->object, best->second);
    }
    EXPECT_EQ(bvh.occluded(r, 1e-9, TriangleBvh::kInfinity), best.has_value());
  }
}

TEST(Render, ShadowFromOccluder) {
  SemanticScene s;
  TriMesh ground;
  ground.vertices = {{-10, -10, 0}, {10, -10, 0}, {10, 10, 0}, {-10, 10, 0}};
  ground.faces = {{0, 1, 2}, {0, 2, 3}};
  s.objects.push_back(make_object("ground", ClassId::kBackground, ground, Vec3(0.5, 0.5, 0.5)));
  s.objects.push_back(make_object("slab", ClassId::kRoof,
                                  testing::box_mesh({-1, -1, 3}, {1, 1, 3.2})));
  SceneState st;
  st.sun_direction = Vec3(0, 0, -1);
  st.ambient = 0.2;
  st.sun_intensity = 1.0;
  s.states.push_back(st);
  CameraPose pose;
  pose.position = Vec3(8, 0, 1);
  pose.look_at = Vec3(0, 0, 0);
  const Renderer r(s);
  const Image img = r.photoreal(pose, st, 64, 64);
  const PinholeCamera cam(pose, 64, 64);
  const auto under = cam.project_to_pixel(Vec3(0, 0, 0));
  const auto lit = cam.project_to_pixel(Vec3(4, 0, 0));
  ASSERT_TRUE(under && lit);
  EXPECT_EQ(img.at(under->first, under->second), (Rgb{26, 26, 26}));  // 0.1
  EXPECT_EQ(img.at(lit->first, lit->second), (Rgb{153, 153, 153}));   // 0.6
}

TEST(Render, DeterministicAcrossWorkerCounts) {
  SemanticScene s = testing::small_scene();
  s.objects[0].material.texture = TextureKind::kNoise;
  s.objects[2].material.texture = TextureKind::kChecker;
  CameraPose pose;
  pose.position = Vec3(7, -3, 3);
  pose.look_at = Vec3(0, 0, 1.5);
  const Renderer r(s);
  RenderOptions one, many;
  many.workers = 4;
  EXPECT_EQ(r.photoreal(pose, s.states[0], 48, 36, one),
            r.photoreal(pose, s.states[0], 48, 36, many));
  const auto a = r.label(pose, 48, 36, one);
  const auto b = r.label(pose, 48, 36, many);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.ids, b.ids);
}

TEST(Render, SkyWhereNothingIsHit) {
  const SemanticScene s = single_quad(ClassId::kWall, Vec3(1, 1, 1),
                                      Vec3(-1, 0, 0), 0.2, 1.0);
  CameraPose pose = looking_down_minus_x();
  pose.look_at = Vec3(10, 0, 10);  // straight up, fallback orientation
  const Image img = render_photoreal(s, pose, s.states[0], 4, 4);
  const Vec3 sky = sky_color(s.states[0]);
  EXPECT_EQ(img.at(1, 1), (Rgb{to_8bit(sky.x()), to_8bit(sky.y()), to_8bit(sky.z())}));
}

TEST(Batch, CountsOrderAndErrors) {
  const SemanticScene s = testing::small_scene();
  OrbitConfig cfg;
  cfg.radius = 9;
  cfg.elevations = {20};
  cfg.views_per_ring = 3;
  const auto poses = generate_orbit(cfg);
  const auto states = daylight_states(2);
  std::vector<std::pair<int, int>> order;
  render_batch(s, poses, states, 12, 10, [&](const RenderPair& p) {
    order.emplace_back(p.view_id, p.state_id);
    EXPECT_EQ(p.photoreal.width(), 12);
    EXPECT_EQ(p.label.height(), 10);
    EXPECT_EQ(p.id_buffer.width(), 12);
  });
  const std::vector<std::pair<int, int>> want = {{0, 0}, {0, 1}, {1, 0},
                                                 {1, 1}, {2, 0}, {2, 1}};
  EXPECT_EQ(order, want);

  int n = 0;
  render_batch(s, {poses[0]}, {states[0]}, 4, 4, [&](const RenderPair&) { ++n; });
  EXPECT_EQ(n, 1);

  try {
    render_batch(s, {}, states, 4, 4, [](const RenderPair&) {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCameraRig);
  }
  EXPECT_THROW(render_batch(s, poses, {}, 4, 4, [](const RenderPair&) {}), Error);
}

}  // namespace
}  // namespace bimsynth
