#include "acgeom/kernels/batch.h"

#include "acgeom/error.h"
#include "acgeom/residuals.h"
#include "internal.h"

#include <cstdlib>
#include <string>

namespace acgeom::kernels {
namespace {

detail::BatchView View(const AcBatch& b) {
  return {b.x1.data(),  b.y1.data(),  b.x2.data(),  b.y2.data(), b.a11.data(),
          b.a12.data(), b.a21.data(), b.a22.data(), b.size()};
}

// Row-major copy; Eigen stores column-major.
void RowMajor(const Mat3& m, double* out) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out[3 * r + c] = m(r, c);
  }
}

void CheckSpan(std::span<double> s, std::size_t n) {
  if (s.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "batch output span has " + std::to_string(s.size()) +
                    " elements, expected " + std::to_string(n));
  }
}

bool CpuHasAvx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa ResolveIsa() {
  const char* forced = std::getenv("ACGEOM_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") return Isa::kScalar;
  if (IsaAvailable(Isa::kAvx2)) return Isa::kAvx2;
  return Isa::kScalar;
}

}  // namespace

AcBatch AcBatch::FromCorrespondences(
    std::span<const AffineCorrespondence> acs) {
  AcBatch b;
  const std::size_t n = acs.size();
  for (auto* v : {&b.x1, &b.y1, &b.x2, &b.y2, &b.a11, &b.a12, &b.a21, &b.a22}) {
    v->reserve(n);
  }
  for (const auto& ac : acs) {
    b.x1.push_back(ac.p1.x());
    b.y1.push_back(ac.p1.y());
    b.x2.push_back(ac.p2.x());
    b.y2.push_back(ac.p2.y());
    b.a11.push_back(ac.A(0, 0));
    b.a12.push_back(ac.A(0, 1));
    b.a21.push_back(ac.A(1, 0));
    b.a22.push_back(ac.A(1, 1));
  }
  return b;
}

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool IsaAvailable(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(ACGEOM_HAVE_AVX2)
      return CpuHasAvx2();
#else
      return false;
#endif
  }
  return false;
}

Isa ActiveIsa() {
  static const Isa isa = ResolveIsa();
  return isa;
}

void SampsonBatch(Isa isa, const AcBatch& batch, const Mat3& F,
                  std::span<double> sd_point, std::span<double> sd_affine1,
                  std::span<double> sd_affine2) {
  const std::size_t n = batch.size();
  CheckSpan(sd_point, n);
  CheckSpan(sd_affine1, n);
  CheckSpan(sd_affine2, n);
  double f[9];
  RowMajor(F, f);
  const double floor = SampsonFloorFor(F);
  if (!IsaAvailable(isa)) isa = Isa::kScalar;
#if defined(ACGEOM_HAVE_AVX2)
  if (isa == Isa::kAvx2) {
    detail::SampsonAvx2(View(batch), f, floor, sd_point.data(),
                        sd_affine1.data(), sd_affine2.data());
    return;
  }
#endif
  detail::SampsonScalar(View(batch), f, floor, sd_point.data(),
                        sd_affine1.data(), sd_affine2.data());
}

void TransferBatch(Isa isa, const AcBatch& batch, const Mat3& H,
                   const Mat3& H_inv, std::span<double> transfer_sq,
                   std::span<double> affine_sq) {
  const std::size_t n = batch.size();
  CheckSpan(transfer_sq, n);
  CheckSpan(affine_sq, n);
  double h[9];
  double g[9];
  RowMajor(H, h);
  RowMajor(H_inv, g);
  if (!IsaAvailable(isa)) isa = Isa::kScalar;
#if defined(ACGEOM_HAVE_AVX2)
  if (isa == Isa::kAvx2) {
    detail::TransferAvx2(View(batch), h, g, transfer_sq.data(),
                         affine_sq.data());
    return;
  }
#endif
  detail::TransferScalar(View(batch), h, g, transfer_sq.data(),
                         affine_sq.data());
}

}  // namespace acgeom::kernels
