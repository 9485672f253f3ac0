#include "bimsynth/align.h"

#include <cmath>

#include <Eigen/Geometry>

#include "bimsynth/error.h"

namespace bimsynth {

bool SimilarityTransform::is_identity() const {
  return scale == 1.0 && rotation == Mat3::Identity() &&
         translation == Vec3::Zero();
}

namespace {

// Columns: unit first edge, in-plane perpendicular, unit normal.
Mat3 triangle_frame(const std::array<Vec3, 3>& p, const char* which) {
  const Vec3 e1 = p[1] - p[0];
  const Vec3 e2 = p[2] - p[0];
  const Vec3 n = e1.cross(e2);
  if (!(0.5 * n.norm() > kMinPickArea)) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                std::string(which) +
                    " points are collinear or coincident; pick three points "
                    "spanning a triangle");
  }
  const Vec3 u = e1.normalized();
  const Vec3 w = n.normalized();
  Mat3 frame;
  frame.col(0) = u;
  frame.col(1) = w.cross(u);
  frame.col(2) = w;
  return frame;
}

}  // namespace

AlignmentResult align_from_three_points(const std::array<Vec3, 3>& src,
                                        const std::array<Vec3, 3>& dst) {
  const Mat3 fs = triangle_frame(src, "source");
  const Mat3 fd = triangle_frame(dst, "destination");

  SimilarityTransform t;
  t.rotation = fd * fs.transpose();

  // argmin_s sum_k (s |src edge k| - |dst edge k|)^2
  double num = 0.0, den = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double ls = (src[(k + 1) % 3] - src[k]).norm();
    const double ld = (dst[(k + 1) % 3] - dst[k]).norm();
    num += ls * ld;
    den += ls * ls;
  }
  t.scale = num / den;

  const Vec3 cs = (src[0] + src[1] + src[2]) / 3.0;
  const Vec3 cd = (dst[0] + dst[1] + dst[2]) / 3.0;
  t.translation = cd - t.scale * (t.rotation * cs);

  AlignmentResult result;
  result.transform = t;
  double sq = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double r = (t.apply(src[i]) - dst[i]).norm();
    result.max_residual = std::max(result.max_residual, r);
    sq += r * r;
  }
  result.rms_residual = std::sqrt(sq / 3.0);
  return result;
}

SemanticScene apply_transform(const SimilarityTransform& t,
                              const SemanticScene& scene) {
  if (!(t.scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "transform scale must be positive");
  }
  SemanticScene out = scene;
  if (t.is_identity()) return out;
  for (auto& obj : out.objects) {
    for (Vec3& v : obj.mesh.vertices) v = t.apply(v);
  }
  return out;
}

}  // namespace bimsynth
