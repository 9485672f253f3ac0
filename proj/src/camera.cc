#include "bimsynth/camera.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "bimsynth/error.h"
#include "text_io.h"

namespace bimsynth {

void validate_pose(const CameraPose& pose) {
  if (pose.position == pose.look_at) {
    throw Error(ErrorCode::kInvalidArgument,
                "pose " + std::to_string(pose.view_id) +
                    ": position equals look_at");
  }
  if (std::abs(pose.up.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument,
                "pose " + std::to_string(pose.view_id) + ": up is not unit");
  }
  if (!(pose.focal_length > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pose " + std::to_string(pose.view_id) +
                    ": focal length must be positive");
  }
}

void validate_orbit(const OrbitConfig& cfg) {
  if (!(cfg.radius > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "orbit radius must be positive");
  }
  if (cfg.elevations.empty() || cfg.views_per_ring < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "orbit needs at least one elevation and one view per ring");
  }
  for (double e : cfg.elevations) {
    if (!(e > -90.0 && e < 90.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "orbit elevation must lie strictly between -90 and 90 deg");
    }
  }
  if (!(cfg.focal_length > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "focal length must be positive");
  }
}

std::vector<CameraPose> generate_orbit(const OrbitConfig& cfg) {
  validate_orbit(cfg);
  constexpr double kDeg = std::numbers::pi / 180.0;
  std::vector<CameraPose> poses;
  poses.reserve(cfg.elevations.size() * cfg.views_per_ring);
  for (double elevation_deg : cfg.elevations) {
    const double el = elevation_deg * kDeg;
    for (int j = 0; j < cfg.views_per_ring; ++j) {
      const double az = 2.0 * std::numbers::pi * j / cfg.views_per_ring;
      const Vec3 dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                     std::sin(el));
      CameraPose pose;
      pose.position = cfg.center + cfg.radius * dir;
      pose.look_at = cfg.center;
      pose.up = Vec3::UnitZ();
      pose.focal_length = cfg.focal_length;
      pose.view_id = static_cast<int>(poses.size());
      poses.push_back(pose);
    }
  }
  return poses;
}

std::vector<CameraPose> parse_poses(const std::string& content,
                                    const std::string& source) {
  std::istringstream in(content);
  text::LineReader reader(in, source);
  std::vector<CameraPose> poses;
  text::Line line;
  while (reader.next(line)) {
    if (line.size() != 7) {
      reader.fail(line, "pose needs 7 numbers (position, look_at, focal "
                        "length), got " + std::to_string(line.size()));
    }
    double v[7];
    for (std::size_t i = 0; i < 7; ++i) v[i] = text::to_double(reader, line, i);
    CameraPose pose;
    pose.position = Vec3(v[0], v[1], v[2]);
    pose.look_at = Vec3(v[3], v[4], v[5]);
    pose.focal_length = v[6];
    pose.view_id = static_cast<int>(poses.size());
    if (pose.position == pose.look_at) {
      reader.fail(line, "pose position equals look_at");
    }
    if (!(pose.focal_length > 0.0)) {
      reader.fail(line, "focal length must be positive");
    }
    poses.push_back(pose);
  }
  return poses;
}

std::vector<CameraPose> import_poses(const std::filesystem::path& path) {
  return parse_poses(text::read_file(path), path.string());
}

void write_poses(const std::vector<CameraPose>& poses,
                 const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# position(x y z) look_at(x y z) focal_length_mm\n";
  for (const auto& p : poses) {
    out << text::format_double(p.position.x()) << ' '
        << text::format_double(p.position.y()) << ' '
        << text::format_double(p.position.z()) << ' '
        << text::format_double(p.look_at.x()) << ' '
        << text::format_double(p.look_at.y()) << ' '
        << text::format_double(p.look_at.z()) << ' '
        << text::format_double(p.focal_length) << '\n';
  }
  text::write_file(path, out.str());
}

PinholeCamera::PinholeCamera(const CameraPose& pose, int width, int height)
    : width_(width), height_(height), position_(pose.position) {
  validate_pose(pose);
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "render size must be positive");
  }
  focal_px_ = pose.focal_length / 36.0 * width;
  forward_ = (pose.look_at - pose.position).normalized();
  Vec3 side = forward_.cross(pose.up);
  if (side.norm() < 1e-9) {
    // Looking along the up vector; pick any stable perpendicular.
    side = forward_.cross(std::abs(forward_.x()) < 0.9 ? Vec3::UnitX()
                                                       : Vec3::UnitY());
  }
  right_ = side.normalized();
  up_ = right_.cross(forward_);
}

Ray PinholeCamera::pixel_ray(int x, int y) const {
  const double a = (x + 0.5 - 0.5 * width_) / focal_px_;
  const double b = (y + 0.5 - 0.5 * height_) / focal_px_;
  return {position_, (forward_ + a * right_ - b * up_).normalized()};
}

std::optional<Eigen::Vector2d> PinholeCamera::project(const Vec3& p) const {
  const Vec3 d = p - position_;
  const double z = d.dot(forward_);
  if (!(z > 0.0)) return std::nullopt;
  return Eigen::Vector2d(focal_px_ * d.dot(right_) / z + 0.5 * width_,
                         -focal_px_ * d.dot(up_) / z + 0.5 * height_);
}

std::optional<std::pair<int, int>> PinholeCamera::project_to_pixel(
    const Vec3& p) const {
  const auto uv = project(p);
  if (!uv) return std::nullopt;
  const double fx = std::floor(uv->x());
  const double fy = std::floor(uv->y());
  if (fx < 0 || fy < 0 || fx >= width_ || fy >= height_) return std::nullopt;
  return std::pair<int, int>{static_cast<int>(fx), static_cast<int>(fy)};
}

}  // namespace bimsynth
