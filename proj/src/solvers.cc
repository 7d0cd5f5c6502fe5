#include "acgeom/solvers.h"

#include "acgeom/error.h"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace acgeom {
namespace {

constexpr double kRankTolerance = 1e-10;

using Row9 = Eigen::Matrix<double, 1, 9>;

Point2 Transform(const Mat3& T, const Point2& p) {
  return {T(0, 0) * p.x() + T(0, 2), T(1, 1) * p.y() + T(1, 2)};
}

void AppendNormalized(Eigen::MatrixXd& M, Eigen::Index& row, const Row9& r) {
  const double norm = r.norm();
  M.row(row++) = norm > 0.0 ? Row9(r / norm) : r;
}

// Unit null vector of M (smallest right singular vector). Throws when the
// second-smallest singular value is negligible, i.e. rank(M) < 8.
Eigen::Matrix<double, 9, 1> NullVector(const Eigen::MatrixXd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() < 8 || !(sv(7) > kRankTolerance * sv(0))) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "linear system has rank below 8");
  }
  return svd.matrixV().col(8);
}

Mat3 Reshape(const Eigen::Matrix<double, 9, 1>& v) {
  Mat3 m;
  m << v(0), v(1), v(2), v(3), v(4), v(5), v(6), v(7), v(8);
  return m;
}

}  // namespace

Mat3 HartleyNormalization(std::span<const Point2> points) {
  if (points.empty()) {
    throw Error(ErrorCode::kDegenerateConfiguration, "no points to normalize");
  }
  Point2 centroid = Point2::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  double sq = 0.0;
  for (const auto& p : points) sq += (p - centroid).squaredNorm();
  const double rms = std::sqrt(sq / static_cast<double>(points.size()));
  if (!(rms > 1e-12 * (1.0 + centroid.norm()))) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "points coincide; cannot normalize");
  }
  const double s = std::sqrt(2.0) / rms;
  Mat3 T;
  T << s, 0.0, -s * centroid.x(), 0.0, s, -s * centroid.y(), 0.0, 0.0, 1.0;
  return T;
}

FundamentalMatrix CanonicalFundamental(const Mat3& F) {
  const double norm = F.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::kDegenerateConfiguration, "zero fundamental matrix");
  }
  Mat3 out = F / norm;
  Eigen::Index r = 0, c = 0;
  out.cwiseAbs().maxCoeff(&r, &c);
  if (out(r, c) < 0.0) out = -out;
  return {out};
}

FundamentalMatrix FundamentalFromAcs(
    std::span<const AffineCorrespondence> acs) {
  if (acs.size() < 3) {
    throw Error(ErrorCode::kTooFewCorrespondences,
                "fundamental matrix needs at least 3 affine correspondences, got " +
                    std::to_string(acs.size()));
  }
  std::vector<Point2> pts1, pts2;
  pts1.reserve(acs.size());
  pts2.reserve(acs.size());
  for (const auto& ac : acs) {
    if (!AllFinite(ac)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite correspondence");
    }
    pts1.push_back(ac.p1);
    pts2.push_back(ac.p2);
  }
  const Mat3 T1 = HartleyNormalization(pts1);
  const Mat3 T2 = HartleyNormalization(pts2);
  // Isotropic scalings s1, s2 turn the local affinity into (s2 / s1) A.
  const double affine_scale = T2(0, 0) / T1(0, 0);

  Eigen::MatrixXd M(3 * acs.size(), 9);
  Eigen::Index row = 0;
  for (const auto& ac : acs) {
    const Point2 q1 = Transform(T1, ac.p1);
    const Point2 q2 = Transform(T2, ac.p2);
    const double x1 = q1.x(), y1 = q1.y(), x2 = q2.x(), y2 = q2.y();
    const Mat2 A = affine_scale * ac.A;
    const double a11 = A(0, 0), a12 = A(0, 1), a21 = A(1, 0), a22 = A(1, 1);

    Row9 epi;
    epi << x2 * x1, x2 * y1, x2, y2 * x1, y2 * y1, y2, x1, y1, 1.0;
    Row9 m0;
    m0 << a11 * x1 + x2, a11 * y1, a11, a21 * x1 + y2, a21 * y1, a21, 1.0, 0.0,
        0.0;
    Row9 n0;
    n0 << a12 * x1, a12 * y1 + x2, a12, a22 * x1, a22 * y1 + y2, a22, 0.0, 1.0,
        0.0;
    AppendNormalized(M, row, epi);
    AppendNormalized(M, row, m0);
    AppendNormalized(M, row, n0);
  }

  const Mat3 Fn = Reshape(NullVector(M));
  Eigen::JacobiSVD<Mat3> svd(Fn, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d sv = svd.singularValues();
  sv(2) = 0.0;
  const Mat3 rank2 = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
  return CanonicalFundamental(T2.transpose() * rank2 * T1);
}

Homography HomographyFromAcs(std::span<const AffineCorrespondence> acs,
                             std::span<const PointPair> extra_points) {
  const std::size_t rows = 6 * acs.size() + 2 * extra_points.size();
  if (rows < 8) {
    throw Error(ErrorCode::kTooFewConstraints,
                "homography needs at least 8 constraints, got " +
                    std::to_string(rows));
  }
  std::vector<Point2> pts1, pts2;
  for (const auto& ac : acs) {
    if (!AllFinite(ac)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite correspondence");
    }
    pts1.push_back(ac.p1);
    pts2.push_back(ac.p2);
  }
  for (const auto& pp : extra_points) {
    if (!pp.p1.allFinite() || !pp.p2.allFinite()) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite point pair");
    }
    pts1.push_back(pp.p1);
    pts2.push_back(pp.p2);
  }
  const Mat3 T1 = HartleyNormalization(pts1);
  const Mat3 T2 = HartleyNormalization(pts2);
  const double affine_scale = T2(0, 0) / T1(0, 0);

  Eigen::MatrixXd M(rows, 9);
  Eigen::Index row = 0;
  auto add_point = [&](const Point2& p1, const Point2& p2) {
    const Point2 q1 = Transform(T1, p1);
    const Point2 q2 = Transform(T2, p2);
    const double x1 = q1.x(), y1 = q1.y(), x2 = q2.x(), y2 = q2.y();
    Row9 rx;
    rx << -x1, -y1, -1.0, 0.0, 0.0, 0.0, x2 * x1, x2 * y1, x2;
    Row9 ry;
    ry << 0.0, 0.0, 0.0, -x1, -y1, -1.0, y2 * x1, y2 * y1, y2;
    AppendNormalized(M, row, rx);
    AppendNormalized(M, row, ry);
  };
  for (const auto& ac : acs) {
    add_point(ac.p1, ac.p2);
    const Point2 q1 = Transform(T1, ac.p1);
    const Point2 q2 = Transform(T2, ac.p2);
    const double x1 = q1.x(), y1 = q1.y(), x2 = q2.x(), y2 = q2.y();
    const Mat2 A = affine_scale * ac.A;
    // h_ij - h_3j * p2_i - a_ij * (h31 x1 + h32 y1 + h33) = 0
    Row9 r11, r12, r21, r22;
    r11 << 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -x2 - A(0, 0) * x1, -A(0, 0) * y1,
        -A(0, 0);
    r12 << 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -A(0, 1) * x1, -x2 - A(0, 1) * y1,
        -A(0, 1);
    r21 << 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -y2 - A(1, 0) * x1, -A(1, 0) * y1,
        -A(1, 0);
    r22 << 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -A(1, 1) * x1, -y2 - A(1, 1) * y1,
        -A(1, 1);
    AppendNormalized(M, row, r11);
    AppendNormalized(M, row, r12);
    AppendNormalized(M, row, r21);
    AppendNormalized(M, row, r22);
  }
  for (const auto& pp : extra_points) add_point(pp.p1, pp.p2);

  Mat3 H = T2.inverse() * Reshape(NullVector(M)) * T1;
  if (std::abs(H(2, 2)) > 1e-12) {
    H /= H(2, 2);
  } else {
    H /= H.norm();
  }
  if (!(std::abs(H.determinant()) > 1e-12)) {
    throw Error(ErrorCode::kDegenerateConfiguration, "homography is singular");
  }
  return {H};
}

EssentialMatrix EssentialFromFundamental(const FundamentalMatrix& F,
                                         const CameraIntrinsics& K1,
                                         const CameraIntrinsics& K2) {
  K1.Validate();
  K2.Validate();
  const Mat3 raw = K2.K().transpose() * F.F * K1.K();
  Eigen::JacobiSVD<Mat3> svd(raw, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // Equal singular values (s, s, 0) with ||E||_F = sqrt(2) means s = 1.
  const Eigen::Vector3d sv(1.0, 1.0, 0.0);
  return {svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose()};
}

FundamentalMatrix FundamentalFromEssential(const EssentialMatrix& E,
                                           const CameraIntrinsics& K1,
                                           const CameraIntrinsics& K2) {
  K1.Validate();
  K2.Validate();
  return CanonicalFundamental(K2.Kinv().transpose() * E.E * K1.Kinv());
}

std::array<RelativePose, 4> EssentialCandidates(const EssentialMatrix& E) {
  Eigen::JacobiSVD<Mat3> svd(E.E, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 U = svd.matrixU();
  Mat3 V = svd.matrixV();
  if (U.determinant() < 0.0) U = -U;
  if (V.determinant() < 0.0) V = -V;
  Mat3 W;
  W << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0;
  const Mat3 Ra = U * W * V.transpose();
  const Mat3 Rb = U * W.transpose() * V.transpose();
  const Vec3 t = U.col(2).normalized();
  return {RelativePose{Ra, t}, RelativePose{Ra, -t}, RelativePose{Rb, t},
          RelativePose{Rb, -t}};
}

namespace {

// Linear triangulation with P1 = [I | 0], P2 = [R | t] on normalized image
// coordinates; true when the point has positive depth in both cameras.
bool InFrontOfBoth(const RelativePose& pose, const Vec3& x1, const Vec3& x2) {
  Eigen::Matrix<double, 3, 4> P1 = Eigen::Matrix<double, 3, 4>::Zero();
  P1.leftCols<3>().setIdentity();
  Eigen::Matrix<double, 3, 4> P2;
  P2.leftCols<3>() = pose.R;
  P2.col(3) = pose.t;
  Eigen::Matrix4d M;
  M.row(0) = x1.x() * P1.row(2) - P1.row(0);
  M.row(1) = x1.y() * P1.row(2) - P1.row(1);
  M.row(2) = x2.x() * P2.row(2) - P2.row(0);
  M.row(3) = x2.y() * P2.row(2) - P2.row(1);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(M, Eigen::ComputeFullV);
  const Eigen::Vector4d X = svd.matrixV().col(3);
  if (!(std::abs(X(3)) > 1e-12 * X.head<3>().norm())) return false;
  const Vec3 P = X.head<3>() / X(3);
  return P.z() > 0.0 && (pose.R * P + pose.t).z() > 0.0;
}

void AssertProperRotation(const Mat3& R) {
  if ((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-10 ||
      std::abs(R.determinant() - 1.0) > 1e-10) {
    throw std::logic_error("essential decomposition produced an improper rotation");
  }
}

}  // namespace

RelativePose DecomposeEssential(const EssentialMatrix& E,
                                std::span<const PointPair> correspondences,
                                const CameraIntrinsics& K1,
                                const CameraIntrinsics& K2) {
  K1.Validate();
  K2.Validate();
  const auto candidates = EssentialCandidates(E);
  const Mat3 K1inv = K1.Kinv();
  const Mat3 K2inv = K2.Kinv();
  std::array<std::size_t, 4> votes{};
  for (const auto& pp : correspondences) {
    const Vec3 x1 = K1inv * Homogeneous(pp.p1);
    const Vec3 x2 = K2inv * Homogeneous(pp.p2);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (InFrontOfBoth(candidates[k], x1 / x1.z(), x2 / x2.z())) ++votes[k];
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < votes.size(); ++k) {
    if (votes[k] > votes[best]) best = k;
  }
  if (!(2 * votes[best] > correspondences.size())) {
    throw Error(ErrorCode::kCheiralityAmbiguity,
                "no factorization puts a strict majority of " +
                    std::to_string(correspondences.size()) +
                    " points in front of both cameras");
  }
  AssertProperRotation(candidates[best].R);
  return candidates[best];
}

Point2 ApplyHomography(const Homography& H, const Point2& p) {
  const Mat3& h = H.H;
  const double s = h(2, 0) * p.x() + h(2, 1) * p.y() + h(2, 2);
  if (!(std::abs(s) > 1e-12)) {
    throw Error(ErrorCode::kPointAtInfinity, "point maps to infinity");
  }
  return {(h(0, 0) * p.x() + h(0, 1) * p.y() + h(0, 2)) / s,
          (h(1, 0) * p.x() + h(1, 1) * p.y() + h(1, 2)) / s};
}

Mat2 GtAffineFromHomography(const Homography& H, const Point2& p1) {
  const Mat3& h = H.H;
  const double s = h(2, 0) * p1.x() + h(2, 1) * p1.y() + h(2, 2);
  if (!(std::abs(s) > 1e-12)) {
    throw Error(ErrorCode::kPointAtInfinity, "point maps to infinity");
  }
  const double x2 = (h(0, 0) * p1.x() + h(0, 1) * p1.y() + h(0, 2)) / s;
  const double y2 = (h(1, 0) * p1.x() + h(1, 1) * p1.y() + h(1, 2)) / s;
  Mat2 A;
  A << (h(0, 0) - x2 * h(2, 0)) / s, (h(0, 1) - x2 * h(2, 1)) / s,
      (h(1, 0) - y2 * h(2, 0)) / s, (h(1, 1) - y2 * h(2, 1)) / s;
  return A;
}

}  // namespace acgeom
