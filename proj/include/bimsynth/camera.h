#ifndef BIMSYNTH_CAMERA_H_
#define BIMSYNTH_CAMERA_H_

#include <filesystem>
#include <optional>
#include <vector>

#include "bimsynth/mesh.h"

namespace bimsynth {

struct CameraPose {
  Vec3 position = Vec3::Zero();
  Vec3 look_at = Vec3::UnitX();
  Vec3 up = Vec3::UnitZ();
  double focal_length = 35.0;  // mm, 35mm-equivalent (36 mm sensor width)
  int view_id = 0;

  friend bool operator==(const CameraPose&, const CameraPose&) = default;
};

void validate_pose(const CameraPose& pose);

// Rings of evenly spaced views around `center`. Azimuth 0 is the +x axis and
// grows counterclockwise seen from +z; up is +z.
struct OrbitConfig {
  Vec3 center = Vec3::Zero();
  double radius = 25.0;
  std::vector<double> elevations = {15.0, 30.0};  // degrees, in (-90, 90)
  int views_per_ring = 55;
  double focal_length = 35.0;
};

void validate_orbit(const OrbitConfig& cfg);

// View ids run 0..N-1 ring-major, azimuth ascending within a ring.
std::vector<CameraPose> generate_orbit(const OrbitConfig& cfg);

// One pose per line: position (3), look_at (3), focal length; '#' comments.
// Up is +z. View ids follow file order.
std::vector<CameraPose> import_poses(const std::filesystem::path& path);
std::vector<CameraPose> parse_poses(const std::string& text,
                                    const std::string& source = "<poses>");
void write_poses(const std::vector<CameraPose>& poses,
                 const std::filesystem::path& path);

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

// Pinhole model of a pose rendered at width x height pixels.
class PinholeCamera {
 public:
  PinholeCamera(const CameraPose& pose, int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  const Vec3& position() const { return position_; }
  double focal_pixels() const { return focal_px_; }

  // Ray through the center of pixel (x, y); y grows downward.
  Ray pixel_ray(int x, int y) const;

  // Continuous image coordinates of a world point in front of the camera.
  std::optional<Eigen::Vector2d> project(const Vec3& p) const;

  // Pixel containing the projection, if inside the image.
  std::optional<std::pair<int, int>> project_to_pixel(const Vec3& p) const;

 private:
  int width_;
  int height_;
  double focal_px_;
  Vec3 position_;
  Vec3 forward_;
  Vec3 right_;
  Vec3 up_;
};

}  // namespace bimsynth

#endif  // BIMSYNTH_CAMERA_H_
