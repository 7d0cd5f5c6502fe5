#include "acgeom/residuals.h"

#include "acgeom/error.h"
#include "acgeom/kernels/formulas.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace acgeom {
namespace {

kernels::FundamentalLanes<double> Lanes(const FundamentalMatrix& F) {
  const Mat3& f = F.F;
  return {f(0, 0), f(0, 1), f(0, 2), f(1, 0), f(1, 1),
          f(1, 2), f(2, 0), f(2, 1), f(2, 2)};
}

kernels::SampsonTerms<double> Terms(const AffineCorrespondence& ac,
                                    const FundamentalMatrix& F) {
  return kernels::Sampson(Lanes(F), ac.p1.x(), ac.p1.y(), ac.p2.x(),
                          ac.p2.y(), ac.A(0, 0), ac.A(0, 1), ac.A(1, 0),
                          ac.A(1, 1), SampsonFloorFor(F.F));
}

}  // namespace

double EpipolarResidual(const Point2& p1, const Point2& p2,
                        const FundamentalMatrix& F) {
  return kernels::EpipolarZ0(Lanes(F), p1.x(), p1.y(), p2.x(), p2.y());
}

AffineResidual AffineConstraintResidual(const AffineCorrespondence& ac,
                                        const FundamentalMatrix& F) {
  const auto f = Lanes(F);
  const double x1 = ac.p1.x(), y1 = ac.p1.y();
  const double x2 = ac.p2.x(), y2 = ac.p2.y();
  return {kernels::AffineM0(f, x1, y1, x2, y2, ac.A(0, 0), ac.A(1, 0)),
          kernels::AffineN0(f, x1, y1, x2, y2, ac.A(0, 1), ac.A(1, 1))};
}

double SampsonPoint(const Point2& p1, const Point2& p2,
                    const FundamentalMatrix& F) {
  AffineCorrespondence ac;
  ac.p1 = p1;
  ac.p2 = p2;
  return Terms(ac, F).point;
}

AffineSampson SampsonAffine(const AffineCorrespondence& ac,
                            const FundamentalMatrix& F) {
  const auto t = Terms(ac, F);
  return {t.affine1, t.affine2};
}

double GenericSampson(const ResidualFunction& residual,
                      const Eigen::VectorXd& x, double step) {
  const Eigen::VectorXd eps = residual(x);
  const Eigen::Index m = eps.size();
  const Eigen::Index n = x.size();
  Eigen::MatrixXd J(m, n);
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    probe(j) = x(j) + step;
    const Eigen::VectorXd plus = residual(probe);
    probe(j) = x(j) - step;
    const Eigen::VectorXd minus = residual(probe);
    probe(j) = x(j);
    J.col(j) = (plus - minus) / (2.0 * step);
  }
  const Eigen::MatrixXd normal = J * J.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
  const double largest = eig.eigenvalues().maxCoeff();
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(largest > 0.0) || !(smallest > largest * 1e-12)) {
    throw Error(ErrorCode::kSingularNormalMatrix,
                "J J^T is singular or has condition number above 1e12");
  }
  return eps.dot(normal.ldlt().solve(eps));
}

FundamentalMatrix NormalizeFundamental(const FundamentalMatrix& F) {
  const double norm = F.F.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fundamental matrix is zero");
  }
  return {F.F / norm};
}

}  // namespace acgeom
