#include "acgeom/metrics.h"

#include "acgeom/error.h"
#include "acgeom/solvers.h"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace acgeom {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Weights 2 - 0.1 thr carried as the integers 20 - thr (tenths), so that the
// denominator is exactly 145 / 10.
int MmaWeightTenths(int thr) { return 20 - thr; }

int MmaWeightSumTenths() {
  int sum = 0;
  for (int thr = 1; thr <= 10; ++thr) sum += MmaWeightTenths(thr);
  return sum;
}

}  // namespace

double MmaWeightSum() { return MmaWeightSumTenths() / 10.0; }

double MmaAtThreshold(std::span<const PointPair> matches, const Homography& H_gt,
                      double thr) {
  if (!(thr > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "MMA threshold must be positive");
  }
  if (matches.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& m : matches) {
    try {
      if ((ApplyHomography(H_gt, m.p1) - m.p2).norm() <= thr) ++correct;
    } catch (const Error&) {
      // Projected to infinity: counts as incorrect.
    }
  }
  return static_cast<double>(correct) / static_cast<double>(matches.size());
}

MmaCurve ComputeMmaCurve(std::span<const PointPair> matches,
                         const Homography& H_gt) {
  MmaCurve curve;
  for (int thr = 1; thr <= 10; ++thr) {
    curve.mma_at[static_cast<std::size_t>(thr - 1)] =
        MmaAtThreshold(matches, H_gt, thr);
  }
  return curve;
}

double MmaScore(const MmaCurve& curve) {
  double num = 0.0;
  for (int thr = 1; thr <= 10; ++thr) {
    num += MmaWeightTenths(thr) * curve.mma_at[static_cast<std::size_t>(thr - 1)];
  }
  return num / MmaWeightSumTenths();
}

MatchEvalReport AggregateMma(std::span<const MmaCurve> per_pair,
                             int n_matches) {
  MatchEvalReport report;
  report.n_pairs = static_cast<int>(per_pair.size());
  report.n_matches = n_matches;
  if (per_pair.empty()) return report;
  for (const auto& c : per_pair) {
    for (std::size_t k = 0; k < c.mma_at.size(); ++k) {
      report.curve.mma_at[k] += c.mma_at[k];
    }
  }
  for (auto& v : report.curve.mma_at) v /= static_cast<double>(per_pair.size());
  report.mma_score = MmaScore(report.curve);
  return report;
}

AffineSimilarity CompareAffine(const Mat2& A_est, const Mat2& A_gt) {
  const Eigen::Vector4d e(A_est(0, 0), A_est(0, 1), A_est(1, 0), A_est(1, 1));
  const Eigen::Vector4d g(A_gt(0, 0), A_gt(0, 1), A_gt(1, 0), A_gt(1, 1));
  const double ne = e.norm();
  const double ng = g.norm();
  if (!(ne > 1e-300) || !(ng > 1e-300)) {
    throw Error(ErrorCode::kZeroVector,
                "cosine similarity of a zero affine matrix is undefined");
  }
  return {(e - g).norm(), std::clamp(e.dot(g) / (ne * ng), -1.0, 1.0)};
}

// Both angles are arccos of a cosine, evaluated as atan2(sin, cos): identical
// in value, but exact near zero where arccos loses half the digits.
PoseError ComputePoseError(const RelativePose& est, const RelativePose& gt) {
  const Mat3 M = gt.R.transpose() * est.R;
  const Eigen::Vector3d axis(M(2, 1) - M(1, 2), M(0, 2) - M(2, 0),
                             M(1, 0) - M(0, 1));
  const double rot = std::atan2(axis.norm(), M.trace() - 1.0) * kRadToDeg;
  const Vec3 a = gt.t.normalized();
  const Vec3 b = est.t.normalized();
  const double trans =
      std::atan2(a.cross(b).norm(), std::abs(a.dot(b))) * kRadToDeg;
  return {rot, trans};
}

std::vector<double> PoseAuc(std::span<const double> errors_deg,
                            std::span<const double> thresholds_deg) {
  if (errors_deg.empty()) {
    throw Error(ErrorCode::kEmptyInput, "pose AUC needs at least one error");
  }
  std::vector<double> errors(errors_deg.begin(), errors_deg.end());
  for (double e : errors) {
    if (std::isnan(e) || e < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "pose errors must be >= 0");
    }
  }
  std::sort(errors.begin(), errors.end());
  const auto n = static_cast<double>(errors.size());
  // Curve samples (0, 0), (e_i, i / n).
  std::vector<double> xs{0.0};
  std::vector<double> recall{0.0};
  for (std::size_t i = 0; i < errors.size(); ++i) {
    xs.push_back(errors[i]);
    recall.push_back(static_cast<double>(i + 1) / n);
  }
  std::vector<double> out;
  for (double tau : thresholds_deg) {
    if (!(tau > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "AUC thresholds must be > 0");
    }
    const auto last = static_cast<std::size_t>(
        std::upper_bound(xs.begin(), xs.end(), tau) - xs.begin());
    double area = 0.0;
    for (std::size_t i = 1; i < last; ++i) {
      area += 0.5 * (recall[i] + recall[i - 1]) * (xs[i] - xs[i - 1]);
    }
    // Flat extension of the last recall value up to tau.
    area += recall[last - 1] * (tau - xs[last - 1]);
    out.push_back(area / tau);
  }
  return out;
}

double Rmse(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "RMSE of nothing");
  double sq = 0.0;
  for (double v : values) sq += v * v;
  return std::sqrt(sq / static_cast<double>(values.size()));
}

double Median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "median of nothing");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace acgeom
