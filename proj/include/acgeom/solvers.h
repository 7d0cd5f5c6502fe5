#pragma once

#include "acgeom/types.h"

#include <array>
#include <span>

namespace acgeom {

// Similarity transform taking a point set to zero centroid and RMS distance
// sqrt(2) from the origin. Throws kDegenerateConfiguration when all points
// coincide.
Mat3 HartleyNormalization(std::span<const Point2> points);

// Fundamental matrix from >= 3 affine correspondences. Each correspondence
// contributes the epipolar row and the two affine rows; the stacked system is
// solved in Hartley-normalized coordinates, projected to rank 2 and returned
// with unit Frobenius norm and its largest-magnitude entry positive.
// Throws kTooFewCorrespondences, kDegenerateConfiguration (rank < 8).
FundamentalMatrix FundamentalFromAcs(std::span<const AffineCorrespondence> acs);

// Homography from correspondences: each AC gives 2 DLT rows plus 4 affine
// rows, each extra pair 2 DLT rows. Returned H is scaled so that h33 = 1
// (when h33 is not ~0). Throws kTooFewConstraints (< 8 rows),
// kDegenerateConfiguration.
Homography HomographyFromAcs(std::span<const AffineCorrespondence> acs,
                             std::span<const PointPair> extra_points = {});

// E = K2^T F K1 projected onto the essential manifold, Frobenius norm sqrt(2).
EssentialMatrix EssentialFromFundamental(const FundamentalMatrix& F,
                                         const CameraIntrinsics& K1,
                                         const CameraIntrinsics& K2);

// F = K2^-T E K1^-1 with unit Frobenius norm, largest entry positive.
FundamentalMatrix FundamentalFromEssential(const EssentialMatrix& E,
                                           const CameraIntrinsics& K1,
                                           const CameraIntrinsics& K2);

// The four (R, t) factorizations of E, in a fixed order.
std::array<RelativePose, 4> EssentialCandidates(const EssentialMatrix& E);

// Picks the factorization of E under which a strict majority of the pixel
// correspondences triangulate in front of both cameras. Throws
// kCheiralityAmbiguity otherwise (including for an empty set).
RelativePose DecomposeEssential(const EssentialMatrix& E,
                                std::span<const PointPair> correspondences,
                                const CameraIntrinsics& K1,
                                const CameraIntrinsics& K2);

// Maps p through H. Throws kPointAtInfinity when |h31 x + h32 y + h33| <=
// 1e-12.
Point2 ApplyHomography(const Homography& H, const Point2& p);

// Jacobian of the warp induced by H, evaluated at p1. Throws
// kPointAtInfinity.
Mat2 GtAffineFromHomography(const Homography& H, const Point2& p1);

// Scales F to unit Frobenius norm with its largest-magnitude entry positive.
FundamentalMatrix CanonicalFundamental(const Mat3& F);

}  // namespace acgeom
