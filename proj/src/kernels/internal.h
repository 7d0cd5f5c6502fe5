#pragma once

// Per-ISA entry points. Kept free of Eigen so the AVX2 translation unit
// instantiates nothing that could be merged with a scalar-compiled copy.

#include <cstddef>

namespace acgeom::kernels::detail {

struct BatchView {
  const double* x1;
  const double* y1;
  const double* x2;
  const double* y2;
  const double* a11;
  const double* a12;
  const double* a21;
  const double* a22;
  std::size_t n;
};

// Matrices are row-major, 9 entries.
// `floor` is the absolute Sampson denominator floor for this f.
void SampsonScalar(const BatchView& b, const double* f, double floor,
                   double* sd_point, double* sd_affine1, double* sd_affine2);
void TransferScalar(const BatchView& b, const double* h, const double* h_inv,
                    double* transfer_sq, double* affine_sq);

#if defined(ACGEOM_HAVE_AVX2)
void SampsonAvx2(const BatchView& b, const double* f, double floor,
                 double* sd_point, double* sd_affine1, double* sd_affine2);
void TransferAvx2(const BatchView& b, const double* h, const double* h_inv,
                  double* transfer_sq, double* affine_sq);
#endif

}  // namespace acgeom::kernels::detail
