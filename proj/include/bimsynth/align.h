#ifndef BIMSYNTH_ALIGN_H_
#define BIMSYNTH_ALIGN_H_

#include <array>

#include <Eigen/Core>

#include "bimsynth/scene.h"

namespace bimsynth {

using Mat3 = Eigen::Matrix3d;

// p -> scale * rotation * p + translation
struct SimilarityTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const { return scale * (rotation * p) + translation; }
  bool is_identity() const;
};

struct AlignmentResult {
  SimilarityTransform transform;
  double max_residual = 0.0;  // max_i |T(src_i) - dst_i|
  double rms_residual = 0.0;
};

// Minimum triangle area (m^2) for a usable triple of picked points.
inline constexpr double kMinPickArea = 1e-9;

// Closed-form registration from three picked correspondences. The rotation
// maps the orthonormal frame of the source triangle (first edge, in-plane
// perpendicular, normal) onto the destination frame; scale is the
// least-squares ratio of the three edge lengths; translation matches the
// centroids. Exact for similar triangles.
// Throws kDegenerateConfiguration for collinear or coincident points.
AlignmentResult align_from_three_points(const std::array<Vec3, 3>& src,
                                        const std::array<Vec3, 3>& dst);

SemanticScene apply_transform(const SimilarityTransform& t,
                              const SemanticScene& scene);

}  // namespace bimsynth

#endif  // BIMSYNTH_ALIGN_H_
