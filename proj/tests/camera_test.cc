#include <gtest/gtest.h>

#include <fstream>

#include "bimsynth/camera.h"
#include "bimsynth/error.h"
#include "test_util.h"

namespace bimsynth {
namespace {

using testing::TempDir;

TEST(Orbit, DefaultRigHas110Views) {
  const auto poses = generate_orbit(OrbitConfig{});
  ASSERT_EQ(poses.size(), 110u);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    EXPECT_EQ(poses[i].view_id, static_cast<int>(i));
  }
}

TEST(Orbit, SingleViewOnPlusX) {
  OrbitConfig cfg;
  cfg.center = Vec3(1, 2, 3);
  cfg.radius = 4.0;
  cfg.elevations = {0.0};
  cfg.views_per_ring = 1;
  const auto poses = generate_orbit(cfg);
  ASSERT_EQ(poses.size(), 1u);
  EXPECT_LT((poses[0].position - Vec3(5, 2, 3)).norm(), 1e-12);
  EXPECT_EQ(poses[0].look_at, cfg.center);
}

TEST(Orbit, DistanceAndLookAtInvariants) {
  OrbitConfig cfg;
  cfg.center = Vec3(-3, 7, 1.5);
  cfg.radius = 13.7;
  cfg.elevations = {-20, 0, 10, 45, 80};
  cfg.views_per_ring = 17;
  const auto poses = generate_orbit(cfg);
  ASSERT_EQ(poses.size(), 85u);
  double worst = 0.0;
  for (const auto& p : poses) {
    worst = std::max(worst, std::abs((p.position - cfg.center).norm() - cfg.radius));
    EXPECT_EQ(p.look_at, cfg.center);
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Orbit, RingMajorCounterclockwise) {
  OrbitConfig cfg;
  cfg.radius = 1.0;
  cfg.elevations = {0.0, 30.0};
  cfg.views_per_ring = 4;
  const auto poses = generate_orbit(cfg);
  // second view of the first ring sits at azimuth 90 degrees: +y
  EXPECT_LT((poses[1].position - Vec3(0, 1, 0)).norm(), 1e-12);
  EXPECT_NEAR(poses[4].position.z(), 0.5, 1e-12);
  EXPECT_EQ(generate_orbit(cfg), poses);
}

TEST(Orbit, InvalidConfigs) {
  OrbitConfig cfg;
  cfg.radius = 0;
  EXPECT_THROW(generate_orbit(cfg), Error);
  cfg = OrbitConfig{};
  cfg.views_per_ring = 0;
  EXPECT_THROW(generate_orbit(cfg), Error);
  cfg = OrbitConfig{};
  cfg.elevations = {};
  EXPECT_THROW(generate_orbit(cfg), Error);
  cfg = OrbitConfig{};
  cfg.elevations = {90.0};
  EXPECT_THROW(generate_orbit(cfg), Error);
}

TEST(Poses, ImportThreePoses) {
  const auto poses = parse_poses(
      "# pos look focal\n0 -10 2  0 0 1  35\n10 0 2 0 0 1 50\n\n"
      "0 10 2 0 0 1 24  # wide\n");
  ASSERT_EQ(poses.size(), 3u);
  EXPECT_EQ(poses[0].view_id, 0);
  EXPECT_EQ(poses[2].view_id, 2);
  EXPECT_EQ(poses[1].focal_length, 50.0);
  EXPECT_EQ(poses[2].position, Vec3(0, 10, 2));
}

TEST(Poses, EmptyFileIsEmptyList) {
  EXPECT_TRUE(parse_poses("").empty());
  EXPECT_TRUE(parse_poses("# nothing\n\n").empty());
}

TEST(Poses, Errors) {
  EXPECT_THROW(parse_poses("1 2 3 1 2 3 35\n"), Error);   // position = look_at
  EXPECT_THROW(parse_poses("0 0 0 1 0 0 0\n"), Error);    // focal
  EXPECT_THROW(parse_poses("0 0 0 1 0 0\n"), Error);      // arity
  EXPECT_THROW(parse_poses("0 0 0 1 0 x 35\n"), Error);   // number
  EXPECT_THROW(import_poses("/nonexistent/poses.txt"), Error);
}

TEST(Poses, WriteImportRoundTrip) {
  TempDir tmp;
  OrbitConfig cfg;
  cfg.views_per_ring = 7;
  const auto poses = generate_orbit(cfg);
  write_poses(poses, tmp / "p.txt");
  EXPECT_EQ(import_poses(tmp / "p.txt"), poses);
}

TEST(Pinhole, CenterRayPointsAtTarget) {
  CameraPose pose;
  pose.position = Vec3(10, 0, 0);
  pose.look_at = Vec3(0, 0, 0);
  const PinholeCamera cam(pose, 4, 4);  // even size: center between pixels
  const Ray r = cam.pixel_ray(1, 1);
  const Ray s = cam.pixel_ray(2, 2);
  const Vec3 mid = (r.direction + s.direction).normalized();
  EXPECT_LT((mid - Vec3(-1, 0, 0)).norm(), 1e-12);
  EXPECT_NEAR(r.direction.norm(), 1.0, 1e-12);
}

TEST(Pinhole, FocalLengthInPixels) {
  CameraPose pose;
  pose.position = Vec3(0, 0, 0);
  pose.look_at = Vec3(1, 0, 0);
  pose.focal_length = 36.0;  // equals the sensor width
  const PinholeCamera cam(pose, 100, 50);
  EXPECT_DOUBLE_EQ(cam.focal_pixels(), 100.0);
}

TEST(Pinhole, ProjectInvertsPixelRay) {
  CameraPose pose;
  pose.position = Vec3(3, -4, 2);
  pose.look_at = Vec3(0, 0, 1);
  const PinholeCamera cam(pose, 64, 48);
  for (int y = 0; y < 48; y += 7) {
    for (int x = 0; x < 64; x += 9) {
      const Ray r = cam.pixel_ray(x, y);
      const auto px = cam.project_to_pixel(r.origin + 5.0 * r.direction);
      ASSERT_TRUE(px.has_value());
      EXPECT_EQ(px->first, x);
      EXPECT_EQ(px->second, y);
    }
  }
  // behind the camera
  EXPECT_FALSE(cam.project(pose.position + (pose.position - pose.look_at)));
}

TEST(Pinhole, ImageUpIsWorldUp) {
  CameraPose pose;
  pose.position = Vec3(10, 0, 0);
  pose.look_at = Vec3(0, 0, 0);
  const PinholeCamera cam(pose, 10, 10);
  EXPECT_GT(cam.pixel_ray(5, 0).direction.z(), 0.0);  // top row looks up
  EXPECT_LT(cam.pixel_ray(0, 5).direction.y(), 0.0);  // left column: -y
}

TEST(Pinhole, StraightDownUsesFallbackUp) {
  CameraPose pose;
  pose.position = Vec3(0, 0, 10);
  pose.look_at = Vec3(0, 0, 0);
  const PinholeCamera cam(pose, 8, 8);
  const Ray r = cam.pixel_ray(3, 3);
  EXPECT_TRUE(r.direction.allFinite());
}

}  // namespace
}  // namespace bimsynth
