#pragma once

#include "acgeom/types.h"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace acgeom::kernels {

// Structure-of-arrays copy of a correspondence set, the layout the batch
// kernels stream through.
struct AcBatch {
  std::vector<double> x1, y1, x2, y2, a11, a12, a21, a22;

  static AcBatch FromCorrespondences(
      std::span<const AffineCorrespondence> acs);
  std::size_t size() const { return x1.size(); }
};

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// True when the running CPU supports the instruction set and the library was
// built with the corresponding kernel.
bool IsaAvailable(Isa isa);

// Best available instruction set, unless ACGEOM_SIMD=scalar forces the
// reference path. Resolved once per process.
Isa ActiveIsa();

// Point and affine Sampson values for every correspondence under F.
// Output spans must have batch.size() elements.
void SampsonBatch(Isa isa, const AcBatch& batch, const Mat3& F,
                  std::span<double> sd_point, std::span<double> sd_affine1,
                  std::span<double> sd_affine2);

// Symmetric transfer error (mean of the squared forward and backward
// distances) and squared Frobenius deviation of A from the warp Jacobian.
void TransferBatch(Isa isa, const AcBatch& batch, const Mat3& H,
                   const Mat3& H_inv, std::span<double> transfer_sq,
                   std::span<double> affine_sq);

inline void SampsonBatch(const AcBatch& batch, const Mat3& F,
                         std::span<double> sd_point,
                         std::span<double> sd_affine1,
                         std::span<double> sd_affine2) {
  SampsonBatch(ActiveIsa(), batch, F, sd_point, sd_affine1, sd_affine2);
}

inline void TransferBatch(const AcBatch& batch, const Mat3& H,
                          const Mat3& H_inv, std::span<double> transfer_sq,
                          std::span<double> affine_sq) {
  TransferBatch(ActiveIsa(), batch, H, H_inv, transfer_sq, affine_sq);
}

}  // namespace acgeom::kernels
