#include "acgeom/affine.h"

#include "acgeom/error.h"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace acgeom {

double WrapAngle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::remainder(radians, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

Mat2 Rotation2(double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  Mat2 R;
  R << c, -s, s, c;
  return R;
}

AffineDecomposition DecomposeAffine(const Mat2& A) {
  if (!A.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "affine matrix is not finite");
  }
  const double det = A.determinant();
  if (!(det > 0.0)) {
    throw Error(ErrorCode::kNonPositiveDeterminant,
                "det(A) = " + std::to_string(det) + " must be positive");
  }
  AffineDecomposition d;
  d.scale_ratio = std::sqrt(det);
  const Mat2 B = A / d.scale_ratio;

  // For B = R(alpha) * P with P symmetric, R(alpha)^T B symmetric forces
  // tan(alpha) = (b21 - b12) / (b11 + b22); atan2 picks the branch with
  // trace(P) > 0, which together with det(P) = 1 makes P positive definite.
  const double alpha = std::atan2(B(1, 0) - B(0, 1), B(0, 0) + B(1, 1));
  d.orientation_delta = WrapAngle(alpha);

  Mat2 P = Rotation2(alpha).transpose() * B;
  const double off = 0.5 * (P(0, 1) + P(1, 0));
  P(0, 1) = off;
  P(1, 0) = off;
  d.residual_shape = P - Mat2::Identity();
  return d;
}

Mat2 SynthesizeAffine(const AffineDecomposition& d) {
  if (!(d.scale_ratio > 0.0) || !std::isfinite(d.scale_ratio) ||
      !std::isfinite(d.orientation_delta) || !d.residual_shape.allFinite()) {
    throw Error(ErrorCode::kInvalidDecomposition,
                "scale must be positive and all parts finite");
  }
  const Mat2 shape = Mat2::Identity() + d.residual_shape;
  if (std::abs(shape.determinant() - 1.0) > 1e-8) {
    throw Error(ErrorCode::kInvalidDecomposition,
                "det(I + residual_shape) must be 1");
  }
  if (std::abs(shape(0, 1) - shape(1, 0)) > 1e-8) {
    throw Error(ErrorCode::kInvalidDecomposition,
                "I + residual_shape must be symmetric");
  }
  return d.scale_ratio * Rotation2(d.orientation_delta) * shape;
}

RelativeFrame ComputeRelativeFrame(double orient_a, double scale_a,
                                   double orient_b, double scale_b) {
  if (!(scale_a > 0.0) || !(scale_b > 0.0)) {
    throw Error(ErrorCode::kNonPositiveScale, "patch scales must be positive");
  }
  return {WrapAngle(orient_b - orient_a), scale_b / scale_a};
}

}  // namespace acgeom
