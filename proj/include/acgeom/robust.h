#pragma once

#include "acgeom/types.h"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace acgeom {

struct RansacConfig {
  // Inlier threshold in pixels: on sqrt(Sampson) for epipolar models, on the
  // RMS symmetric transfer error for homographies.
  double threshold = 0.5;
  double confidence = 0.99;
  int max_iterations = 10000;
  // Weight of the affine residuals in the truncated model score. The inlier
  // test itself never looks at them.
  double affine_weight = 0.1;
  std::uint64_t seed = 0;
  bool lo_enabled = true;
  // Worker threads for hypothesis evaluation; results do not depend on it.
  int threads = 1;

  // Throws kInvalidArgument.
  void Validate() const;
};

enum class ModelKind { kFundamental, kEssential, kHomography };

struct RobustEstimate {
  ModelKind kind = ModelKind::kFundamental;
  Mat3 model = Mat3::Zero();
  std::vector<bool> inlier_mask;
  int iterations_run = 0;
  double score = 0.0;  // sum of truncated per-datum costs, lower is better

  std::size_t InlierCount() const;
};

// ceil(log(1 - confidence) / log(1 - w^sample_size)) clamped to
// [1, max_iterations]; max_iterations when w == 0.
int AdaptiveIterationBound(double inlier_ratio, int sample_size,
                           double confidence, int max_iterations);

// LO-RANSAC over 3-AC samples. Throws kTooFewCorrespondences, kNoModelFound.
RobustEstimate RansacFundamental(std::span<const AffineCorrespondence> acs,
                                 const RansacConfig& cfg);

struct PoseEstimate {
  RelativePose pose;
  FundamentalMatrix F;
  RobustEstimate estimate;  // kind kEssential, model holds E
};

// RansacFundamental, then projection to E and cheirality-checked
// decomposition over the inliers.
PoseEstimate RansacPose(std::span<const AffineCorrespondence> acs,
                        const CameraIntrinsics& K1, const CameraIntrinsics& K2,
                        const RansacConfig& cfg);

// LO-RANSAC over 2-AC samples. Extra point pairs take part in scoring and
// refits; the mask lists the ACs first, then the extra pairs.
RobustEstimate RansacHomography(std::span<const AffineCorrespondence> acs,
                                std::span<const PointPair> extra_points,
                                const RansacConfig& cfg);

}  // namespace acgeom
