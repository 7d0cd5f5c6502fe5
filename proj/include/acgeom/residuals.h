#pragma once

#include "acgeom/types.h"

#include <Eigen/Core>

#include <functional>
#include <limits>

namespace acgeom {

// Sampson values are non-negative; a degenerate first-order normal equation
// is reported as +infinity so that robust estimators can treat the match as
// an outlier without branching. Degenerate means a denominator at or below
// kSampsonDenominatorFloor * ||F||_F^2, i.e. the floor applies to F scaled to
// unit Frobenius norm, which keeps the sentinel scale-invariant like the
// values themselves.
inline constexpr double kSampsonDenominatorFloor = 1e-18;
inline constexpr double kResidualSentinel =
    std::numeric_limits<double>::infinity();

inline double SampsonFloorFor(const Mat3& F) {
  return kSampsonDenominatorFloor * F.squaredNorm();
}

// p2^T F p1 with both points homogenized.
double EpipolarResidual(const Point2& p1, const Point2& p2,
                        const FundamentalMatrix& F);

struct AffineResidual {
  double m0 = 0.0;  // derivative of the epipolar constraint along x1
  double n0 = 0.0;  // derivative of the epipolar constraint along y1
};

// The two affine epipolar constraint rows (M0, N0):
//   M0 = a11 (F p1)_1 + a21 (F p1)_2 + (F^T p2)_1
//   N0 = a12 (F p1)_1 + a22 (F p1)_2 + (F^T p2)_2
// Both vanish when A is the Jacobian of a warp p1 -> p2 that respects F.
AffineResidual AffineConstraintResidual(const AffineCorrespondence& ac,
                                        const FundamentalMatrix& F);

// Z0^2 / (Z1^2 + Z2^2 + Z3^2 + Z4^2), Z0 = p2^T F p1 and Z1..Z4 its partial
// derivatives in x1, y1, x2, y2. Squared pixels.
double SampsonPoint(const Point2& p1, const Point2& p2,
                    const FundamentalMatrix& F);

struct AffineSampson {
  double first = 0.0;   // M0^2 / sum(M1..M6^2)
  double second = 0.0;  // N0^2 / sum(N1..N6^2)
};

AffineSampson SampsonAffine(const AffineCorrespondence& ac,
                            const FundamentalMatrix& F);

using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

inline constexpr double kGenericSampsonStep = 1e-6;

// First-order Sampson distance eps^T (J J^T)^{-1} eps for an arbitrary
// residual, with J from central differences. Used as an independent check on
// the closed forms above. Throws kSingularNormalMatrix when J J^T has
// condition number above 1e12 (or is zero).
double GenericSampson(const ResidualFunction& residual, const Eigen::VectorXd& x,
                      double step = kGenericSampsonStep);

// Frobenius-normalizes F and returns the result.
FundamentalMatrix NormalizeFundamental(const FundamentalMatrix& F);

}  // namespace acgeom
