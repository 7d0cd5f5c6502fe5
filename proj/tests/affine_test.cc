#include "acgeom/affine.h"

#include "acgeom/error.h"
#include "support.h"

#include <Eigen/SVD>
#include <gtest/gtest.h>

namespace acgeom {
namespace {

using test::kPi;

// Polar factors of B = U S V^T: R = U V^T, P = V S V^T.
void OraclePolar(const Mat2& B, Mat2* R, Mat2* P) {
  Eigen::JacobiSVD<Mat2> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  *R = svd.matrixU() * svd.matrixV().transpose();
  *P = svd.matrixV() * svd.singularValues().asDiagonal() *
       svd.matrixV().transpose();
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an acgeom::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(DecomposeAffine, PureScaling) {
  Mat2 A;
  A << 2, 0, 0, 2;
  const AffineDecomposition d = DecomposeAffine(A);
  EXPECT_DOUBLE_EQ(d.scale_ratio, 2.0);
  EXPECT_DOUBLE_EQ(d.orientation_delta, 0.0);
  EXPECT_LT(d.residual_shape.norm(), 1e-15);
}

TEST(DecomposeAffine, ScaledQuarterTurn) {
  Mat2 A;
  A << 0, -2, 2, 0;
  const AffineDecomposition d = DecomposeAffine(A);
  Mat2 R, P;
  OraclePolar(A / 2.0, &R, &P);
  EXPECT_NEAR(d.scale_ratio, 2.0, 1e-15);
  EXPECT_NEAR(d.orientation_delta, std::atan2(R(1, 0), R(0, 0)), 1e-15);
  EXPECT_NEAR(d.orientation_delta, kPi / 2, 1e-15);
  EXPECT_LT(d.residual_shape.norm(), 1e-15);
}

TEST(DecomposeAffine, RejectsReflection) {
  Mat2 A;
  A << 1, 0, 0, -1;
  EXPECT_EQ(CodeOf([&] { DecomposeAffine(A); }),
            ErrorCode::kNonPositiveDeterminant);
  EXPECT_EQ(CodeOf([&] { DecomposeAffine(Mat2::Zero()); }),
            ErrorCode::kNonPositiveDeterminant);
}

TEST(DecomposeAffine, MatchesSvdPolarFactors) {
  test::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Mat2 A = test::RandomPositiveAffine(rng);
    const AffineDecomposition d = DecomposeAffine(A);
    Mat2 R, P;
    OraclePolar(A / std::sqrt(A.determinant()), &R, &P);
    EXPECT_NEAR(d.orientation_delta, std::atan2(R(1, 0), R(0, 0)), 1e-10);
    EXPECT_LT((d.residual_shape + Mat2::Identity() - P).norm(), 1e-10);
  }
}

TEST(DecomposeAffine, InvariantsHold) {
  test::Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const AffineDecomposition d =
        DecomposeAffine(test::RandomPositiveAffine(rng));
    const Mat2 shape = Mat2::Identity() + d.residual_shape;
    EXPECT_GT(d.scale_ratio, 0.0);
    EXPECT_NEAR(shape.determinant(), 1.0, 1e-10);
    EXPECT_NEAR(shape(0, 1), shape(1, 0), 1e-10);
    EXPECT_GT(shape(0, 0), 0.0);  // with det 1, positive definite
    EXPECT_GT(d.orientation_delta, -kPi);
    EXPECT_LE(d.orientation_delta, kPi);
  }
}

TEST(DecomposeAffine, SimilarityHasNoResidualShape) {
  test::Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const double c = test::Uniform(rng, 1e-3, 1e3);
    double theta = test::Uniform(rng, -kPi, kPi);
    if (i == 0) theta = kPi;
    const AffineDecomposition d = DecomposeAffine(c * Rotation2(theta));
    EXPECT_LE(test::RelErr(d.scale_ratio, c), 1e-10);
    EXPECT_NEAR(WrapAngle(d.orientation_delta - theta), 0.0, 1e-10);
    EXPECT_LT(d.residual_shape.norm(), 1e-10);
  }
}

TEST(SynthesizeAffine, Identity) {
  EXPECT_EQ(SynthesizeAffine({1.0, 0.0, Mat2::Zero()}), Mat2::Identity());
}

TEST(SynthesizeAffine, ScaledQuarterTurn) {
  Mat2 expected;
  expected << 0, -2, 2, 0;
  EXPECT_LT((SynthesizeAffine({2.0, kPi / 2, Mat2::Zero()}) - expected).norm(),
            1e-15);
}

TEST(SynthesizeAffine, RoundTrip) {
  test::Rng rng(14);
  for (int i = 0; i < 1000; ++i) {
    const Mat2 A = test::RandomPositiveAffine(rng);
    EXPECT_LE(test::MatRelErr(SynthesizeAffine(DecomposeAffine(A)), A), 1e-10);
  }
}

TEST(SynthesizeAffine, DeterminantIsSquaredScale) {
  test::Rng rng(15);
  for (int i = 0; i < 1000; ++i) {
    // Random SPD shape with unit determinant: diag(k, 1/k) rotated.
    const double k = test::Uniform(rng, 0.2, 5.0);
    const Mat2 Q = Rotation2(test::Uniform(rng, -kPi, kPi));
    const Mat2 shape = Q * Eigen::Vector2d(k, 1.0 / k).asDiagonal() *
                       Q.transpose();
    const double s = test::Uniform(rng, 0.1, 10.0);
    const AffineDecomposition d{s, test::Uniform(rng, -kPi, kPi),
                                shape - Mat2::Identity()};
    EXPECT_LE(test::RelErr(SynthesizeAffine(d).determinant(), s * s), 1e-10);
  }
}

TEST(SynthesizeAffine, RejectsInvalidParts) {
  Mat2 bad_det;
  bad_det << 0.1, 0, 0, 0.1;  // det(I + A'') = 1.21
  EXPECT_EQ(CodeOf([&] { SynthesizeAffine({1.0, 0.0, bad_det}); }),
            ErrorCode::kInvalidDecomposition);
  Mat2 asym;
  asym << 0, 0.5, 0, 0;  // det 1 but not symmetric
  EXPECT_EQ(CodeOf([&] { SynthesizeAffine({1.0, 0.0, asym}); }),
            ErrorCode::kInvalidDecomposition);
  EXPECT_EQ(CodeOf([&] { SynthesizeAffine({0.0, 0.0, Mat2::Zero()}); }),
            ErrorCode::kInvalidDecomposition);
  EXPECT_EQ(CodeOf([&] { SynthesizeAffine({-1.0, 0.0, Mat2::Zero()}); }),
            ErrorCode::kInvalidDecomposition);
}

TEST(RelativeFrame, Examples) {
  RelativeFrame r = ComputeRelativeFrame(0, 1, 0, 1);
  EXPECT_EQ(r.orientation_delta, 0.0);
  EXPECT_EQ(r.scale_ratio, 1.0);

  r = ComputeRelativeFrame(3, 1, -3, 1);
  EXPECT_NEAR(r.orientation_delta, -6.0 + 2.0 * kPi, 1e-15);
  EXPECT_NEAR(r.orientation_delta, 0.2832, 1e-4);
  EXPECT_EQ(r.scale_ratio, 1.0);

  r = ComputeRelativeFrame(0, 2, 0, 1);
  EXPECT_EQ(r.orientation_delta, 0.0);
  EXPECT_EQ(r.scale_ratio, 0.5);
}

TEST(RelativeFrame, RejectsNonPositiveScale) {
  EXPECT_EQ(CodeOf([] { ComputeRelativeFrame(0, 0, 0, 1); }),
            ErrorCode::kNonPositiveScale);
  EXPECT_EQ(CodeOf([] { ComputeRelativeFrame(0, 1, 0, -1); }),
            ErrorCode::kNonPositiveScale);
}

TEST(WrapAngle, RangeIsHalfOpen) {
  EXPECT_EQ(WrapAngle(kPi), kPi);
  EXPECT_EQ(WrapAngle(-kPi), kPi);
  test::Rng rng(16);
  for (int i = 0; i < 10000; ++i) {
    const double a = test::Uniform(rng, -100, 100);
    const double w = WrapAngle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(a - w, 2 * kPi), 0.0, 1e-12);
  }
}

}  // namespace
}  // namespace acgeom
