#pragma once

#include "acgeom/types.h"

namespace acgeom {

// A = scale_ratio * R(orientation_delta) * (I + residual_shape), where
// I + residual_shape is symmetric positive definite with unit determinant.
struct AffineDecomposition {
  double scale_ratio = 1.0;
  double orientation_delta = 0.0;  // radians, (-pi, pi], counter-clockwise
  Mat2 residual_shape = Mat2::Zero();
};

// Wraps an angle in radians into (-pi, pi].
double WrapAngle(double radians);

Mat2 Rotation2(double radians);

// Polar decomposition of A / sqrt(det A). Throws kNonPositiveDeterminant for
// det(A) <= 0 (orientation-reversing or degenerate local affinities).
AffineDecomposition DecomposeAffine(const Mat2& A);

// Inverse of DecomposeAffine. Throws kInvalidDecomposition when the shape
// part is not a unit-determinant symmetric matrix (tolerance 1e-8) or the
// scale is not positive.
Mat2 SynthesizeAffine(const AffineDecomposition& d);

struct RelativeFrame {
  double orientation_delta = 0.0;  // wrapped to (-pi, pi]
  double scale_ratio = 1.0;
};

// Relative orientation and scale between two patch frames:
// (orient_b - orient_a, scale_b / scale_a). Throws kNonPositiveScale.
RelativeFrame ComputeRelativeFrame(double orient_a, double scale_a,
                                   double orient_b, double scale_b);

}  // namespace acgeom
