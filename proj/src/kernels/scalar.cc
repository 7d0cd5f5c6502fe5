#include "acgeom/kernels/formulas.h"
#include "internal.h"

namespace acgeom::kernels::detail {
namespace {

FundamentalLanes<double> LoadF(const double* f) {
  return {f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8]};
}

HomographyLanes<double> LoadH(const double* h) {
  return {h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], h[8]};
}

}  // namespace

void SampsonScalar(const BatchView& b, const double* f, double floor,
                   double* sd_point, double* sd_affine1, double* sd_affine2) {
  const FundamentalLanes<double> lanes = LoadF(f);
  for (std::size_t i = 0; i < b.n; ++i) {
    const SampsonTerms<double> t =
        Sampson(lanes, b.x1[i], b.y1[i], b.x2[i], b.y2[i], b.a11[i], b.a12[i],
                b.a21[i], b.a22[i], floor);
    sd_point[i] = t.point;
    sd_affine1[i] = t.affine1;
    sd_affine2[i] = t.affine2;
  }
}

void TransferScalar(const BatchView& b, const double* h, const double* h_inv,
                    double* transfer_sq, double* affine_sq) {
  const HomographyLanes<double> fwd = LoadH(h);
  const HomographyLanes<double> bwd = LoadH(h_inv);
  constexpr double kFloor = 1e-12;
  for (std::size_t i = 0; i < b.n; ++i) {
    const TransferTerms<double> t =
        Transfer(fwd, bwd, b.x1[i], b.y1[i], b.x2[i], b.y2[i], b.a11[i],
                 b.a12[i], b.a21[i], b.a22[i], kFloor, 0.5);
    transfer_sq[i] = t.transfer_sq;
    affine_sq[i] = t.affine_sq;
  }
}

}  // namespace acgeom::kernels::detail
