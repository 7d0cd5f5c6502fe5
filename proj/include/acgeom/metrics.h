#pragma once

#include "acgeom/types.h"

#include <array>
#include <span>
#include <vector>

namespace acgeom {

// MMA at integer pixel thresholds 1..10; index k holds MMA@(k + 1).
struct MmaCurve {
  std::array<double, 10> mma_at{};
};

struct MatchEvalReport {
  MmaCurve curve;
  double mma_score = 0.0;
  int n_pairs = 0;
  int n_matches = 0;
};

struct PoseError {
  double rotation_deg = 0.0;
  double translation_deg = 0.0;
};

// Sum over thr = 1..10 of (2 - 0.1 thr); equals 14.5.
double MmaWeightSum();

// Fraction of matches whose reprojection ||H p1 - p2|| is within thr pixels.
// Matches mapping to infinity count as incorrect; an empty set gives 0.
double MmaAtThreshold(std::span<const PointPair> matches, const Homography& H_gt,
                      double thr);

MmaCurve ComputeMmaCurve(std::span<const PointPair> matches,
                         const Homography& H_gt);

// Weighted mean of the curve with weights (2 - 0.1 thr).
double MmaScore(const MmaCurve& curve);

// Per-pair curves averaged pointwise, then scored.
MatchEvalReport AggregateMma(std::span<const MmaCurve> per_pair,
                             int n_matches);

struct AffineSimilarity {
  double distance = 0.0;  // ||vec(A_est) - vec(A_gt)||_2
  double cosine = 0.0;
};

// Throws kZeroVector when either matrix has (numerically) zero norm.
AffineSimilarity CompareAffine(const Mat2& A_est, const Mat2& A_gt);

// Rotation error is the angle of R_gt^T R_est; translation error the angle
// between the directions with the sign ambiguity absorbed (|dot|). Degrees.
PoseError ComputePoseError(const RelativePose& est, const RelativePose& gt);

// Area under the cumulative recall curve of `errors_deg` on [0, tau],
// normalized by tau, for each tau. Recall is linearly interpolated between
// sorted errors, errors equal to tau count as recalled. Failures should be
// passed as +infinity. Throws kEmptyInput.
std::vector<double> PoseAuc(std::span<const double> errors_deg,
                            std::span<const double> thresholds_deg);

// Throws kEmptyInput.
double Rmse(std::span<const double> values);
double Median(std::span<const double> values);

}  // namespace acgeom
