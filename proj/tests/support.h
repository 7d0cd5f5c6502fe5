#pragma once

// Random instance generators and brute-force oracles shared by the suites.
// Oracles here deliberately avoid the library code paths they check.

#include "acgeom/residuals.h"
#include "acgeom/types.h"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace acgeom::test {

using Rng = std::mt19937_64;

inline double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double Gaussian(Rng& rng, double sigma) {
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

inline double RelErr(double value, double reference) {
  const double scale = std::max(std::abs(reference), 1e-300);
  return std::abs(value - reference) / scale;
}

template <class M>
double MatRelErr(const M& value, const M& reference) {
  return (value - reference).norm() / std::max(reference.norm(), 1e-300);
}

inline constexpr double kPi = 3.14159265358979323846;
inline double Deg(double rad) { return rad * 180.0 / kPi; }
inline double Rad(double deg) { return deg * kPi / 180.0; }

// Scales both matrices to unit Frobenius norm and aligns the sign of `m`
// with `ref`; returns the residual norm.
inline double ProjectiveDistance(const Mat3& m, const Mat3& ref) {
  const Mat3 a = m / m.norm();
  const Mat3 b = ref / ref.norm();
  return std::min((a - b).norm(), (a + b).norm());
}

inline Mat2 RandomPositiveAffine(Rng& rng) {
  for (;;) {
    Mat2 A;
    A << Uniform(rng, -3, 3), Uniform(rng, -3, 3), Uniform(rng, -3, 3),
        Uniform(rng, -3, 3);
    if (A.determinant() > 1e-3) return A;
  }
}

inline Mat3 RotationAboutAxis(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

inline Mat3 RandomRotation(Rng& rng, double max_angle_rad) {
  const Vec3 axis(Gaussian(rng, 1), Gaussian(rng, 1), Gaussian(rng, 1));
  return RotationAboutAxis(axis, Uniform(rng, -max_angle_rad, max_angle_rad));
}

// F of a random calibrated camera pair in pixel coordinates, assembled
// directly from K^-T [t]x R K^-1 (no library solver involved).
inline Mat3 RandomPixelFundamental(Rng& rng) {
  Mat3 K;
  K << Uniform(rng, 500, 1200), 0, Uniform(rng, 250, 400), 0,
      Uniform(rng, 500, 1200), Uniform(rng, 200, 300), 0, 0, 1;
  const Mat3 R = RandomRotation(rng, 0.5);
  const Vec3 t(Gaussian(rng, 1), Gaussian(rng, 1), Gaussian(rng, 1));
  Mat3 tx;
  tx << 0, -t.z(), t.y(), t.z(), 0, -t.x(), -t.y(), t.x(), 0;
  const Mat3 Kinv = K.inverse();
  const Mat3 F = Kinv.transpose() * tx * R * Kinv;
  return F / F.norm();
}

inline AffineCorrespondence RandomAc(Rng& rng) {
  AffineCorrespondence ac;
  ac.p1 = Point2(Uniform(rng, 0, 640), Uniform(rng, 0, 480));
  ac.p2 = Point2(Uniform(rng, 0, 640), Uniform(rng, 0, 480));
  ac.A = RandomPositiveAffine(rng);
  return ac;
}

// Well-scaled instance: Gaussian unit-norm F, coordinates in [-2, 2]. This is
// the regime (Hartley-normalized coordinates) in which a fixed-step numeric
// Jacobian is accurate to ~1e-10.
inline Mat3 RandomUnitFundamental(Rng& rng) {
  Mat3 F;
  for (int i = 0; i < 9; ++i) F(i / 3, i % 3) = Gaussian(rng, 1.0);
  return F / F.norm();
}

inline AffineCorrespondence RandomNormalizedAc(Rng& rng) {
  AffineCorrespondence ac;
  ac.p1 = Point2(Uniform(rng, -2, 2), Uniform(rng, -2, 2));
  ac.p2 = Point2(Uniform(rng, -2, 2), Uniform(rng, -2, 2));
  ac.A = RandomPositiveAffine(rng);
  return ac;
}

// Conditioning-bounded random homography around a similarity.
inline Mat3 RandomWellConditionedHomography(Rng& rng) {
  for (;;) {
    Mat3 H;
    H << Uniform(rng, 0.5, 2.0), Uniform(rng, -0.3, 0.3),
        Uniform(rng, -100, 100), Uniform(rng, -0.3, 0.3),
        Uniform(rng, 0.5, 2.0), Uniform(rng, -100, 100),
        Uniform(rng, -5e-4, 5e-4), Uniform(rng, -5e-4, 5e-4), 1.0;
    Eigen::JacobiSVD<Mat3> svd(H);
    const auto s = svd.singularValues();
    if (s(0) / s(2) <= 1e4) return H;
  }
}

// Epipolar constraint in matrix form.
inline double OracleEpipolar(const Mat3& F, const Point2& p1, const Point2& p2) {
  return Vec3(p2.x(), p2.y(), 1.0).dot(F * Vec3(p1.x(), p1.y(), 1.0));
}

// Directional derivative of the epipolar constraint when p1 moves along the
// unit axis e_k and p2 follows through A: d/dt (p2 + t A e_k)^T F (p1 + t e_k).
inline double OracleAffineRow(const Mat3& F, const AffineCorrespondence& ac,
                              int k) {
  const Vec3 h1(ac.p1.x(), ac.p1.y(), 1.0);
  const Vec3 h2(ac.p2.x(), ac.p2.y(), 1.0);
  const Vec3 d1 = k == 0 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  const Vec3 d2(ac.A(0, k), ac.A(1, k), 0.0);
  return d2.dot(F * h1) + h2.dot(F * d1);
}

inline Eigen::VectorXd Pack(const AffineCorrespondence& ac) {
  Eigen::VectorXd x(8);
  x << ac.p1.x(), ac.p1.y(), ac.p2.x(), ac.p2.y(), ac.A(0, 0), ac.A(0, 1),
      ac.A(1, 0), ac.A(1, 1);
  return x;
}

inline AffineCorrespondence Unpack(const Eigen::VectorXd& x) {
  AffineCorrespondence ac;
  ac.p1 = Point2(x[0], x[1]);
  ac.p2 = Point2(x[2], x[3]);
  ac.A << x[4], x[5], x[6], x[7];
  return ac;
}

// Residual functions over the full 8-vector, built from the matrix-form
// oracles rather than from the expanded library terms.
inline ResidualFunction EpipolarFn(const Mat3& F) {
  return [F](const Eigen::VectorXd& x) {
    const AffineCorrespondence ac = Unpack(x);
    return Eigen::VectorXd::Constant(1, OracleEpipolar(F, ac.p1, ac.p2));
  };
}

inline ResidualFunction AffineRowFn(const Mat3& F, int k) {
  return [F, k](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, OracleAffineRow(F, Unpack(x), k));
  };
}

// Jacobian of the homography warp by central differences.
inline Mat2 FiniteDifferenceWarpJacobian(const Mat3& H, const Point2& p,
                                         double step) {
  const auto warp = [&](const Point2& q) {
    const Vec3 w = H * Vec3(q.x(), q.y(), 1.0);
    return Point2(w.x() / w.z(), w.y() / w.z());
  };
  Mat2 J;
  for (int k = 0; k < 2; ++k) {
    Point2 d = Point2::Zero();
    d[k] = step;
    J.col(k) = (warp(p + d) - warp(p - d)) / (2.0 * step);
  }
  return J;
}

// Exact geometric distance of (p1, p2) to the epipolar variety of F:
// min |p1 - q1|^2 + |p2 - q2|^2 over q2^T F q1 = 0. For a fixed q1 the best
// q2 is the foot of p2 on the line F q1, so the search is over q1 only:
// dense grid followed by shrinking pattern-search refinement.
inline double OracleGeometricDistance(const Mat3& F, const Point2& p1,
                                      const Point2& p2, double radius) {
  const Vec3 h2(p2.x(), p2.y(), 1.0);
  const auto cost = [&](const Point2& q1) {
    const Vec3 l = F * Vec3(q1.x(), q1.y(), 1.0);
    const double n2 = l.x() * l.x() + l.y() * l.y();
    const double r = l.dot(h2);
    return (q1 - p1).squaredNorm() + r * r / n2;
  };
  Point2 best = p1;
  double best_cost = cost(p1);
  constexpr int kGrid = 80;
  for (int i = -kGrid; i <= kGrid; ++i) {
    for (int j = -kGrid; j <= kGrid; ++j) {
      const Point2 q = p1 + Point2(i, j) * (radius / kGrid);
      const double c = cost(q);
      if (c < best_cost) {
        best_cost = c;
        best = q;
      }
    }
  }
  for (double h = radius / kGrid; h > 1e-12; h *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
          const Point2 q = best + Point2(i, j) * h;
          const double c = cost(q);
          if (c < best_cost) {
            best_cost = c;
            best = q;
            improved = true;
          }
        }
      }
    }
  }
  return std::sqrt(best_cost);
}

// Independent AUC: the recall curve through (0, 0) and (e_i, i / n) for the
// errors e_i <= tau, linear between those samples and flat from the last one
// up to tau, integrated on [0, tau] by the midpoint rule.
inline double OracleAucMidpoint(std::vector<double> errors, double tau,
                                int steps) {
  std::sort(errors.begin(), errors.end());
  const double n = static_cast<double>(errors.size());
  const auto recall = [&](double e) {
    double x0 = 0.0;
    double r0 = 0.0;
    for (std::size_t i = 0; i < errors.size() && errors[i] <= tau; ++i) {
      const double x1 = errors[i];
      const double r1 = static_cast<double>(i + 1) / n;
      if (e < x1) return r0 + (r1 - r0) * (e - x0) / (x1 - x0);
      x0 = x1;
      r0 = r1;
    }
    return r0;
  };
  double area = 0.0;
  const double h = tau / steps;
  for (int i = 0; i < steps; ++i) area += recall((i + 0.5) * h) * h;
  return area / tau;
}

}  // namespace acgeom::test
