#include <immintrin.h>

#include <limits>

#include "acgeom/kernels/formulas.h"
#include "internal.h"

namespace acgeom::kernels {

// Four double lanes. Only plain add/sub/mul/div are used (no FMA), which keeps
// every lane bit-identical to the scalar reference.
struct Vd4 {
  __m256d v;
};

inline Vd4 operator+(Vd4 a, Vd4 b) { return {_mm256_add_pd(a.v, b.v)}; }
inline Vd4 operator-(Vd4 a, Vd4 b) { return {_mm256_sub_pd(a.v, b.v)}; }
inline Vd4 operator*(Vd4 a, Vd4 b) { return {_mm256_mul_pd(a.v, b.v)}; }
inline Vd4 operator/(Vd4 a, Vd4 b) { return {_mm256_div_pd(a.v, b.v)}; }

inline Vd4 RatioOrInf(Vd4 num, Vd4 den, Vd4 floor) {
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256d ratio = _mm256_div_pd(num.v, den.v);
  const __m256d degenerate = _mm256_cmp_pd(den.v, floor.v, _CMP_LE_OQ);
  return {_mm256_blendv_pd(ratio, inf, degenerate)};
}

inline Vd4 TransferOrInf(Vd4 w, Vd4 value, Vd4 floor) {
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256d abs_w = _mm256_andnot_pd(_mm256_set1_pd(-0.0), w.v);
  const __m256d degenerate = _mm256_cmp_pd(abs_w, floor.v, _CMP_LE_OQ);
  return {_mm256_blendv_pd(value.v, inf, degenerate)};
}

namespace detail {
namespace {

inline Vd4 Splat(double x) { return {_mm256_set1_pd(x)}; }
inline Vd4 Load(const double* p) { return {_mm256_loadu_pd(p)}; }
inline void Store(double* p, Vd4 v) { _mm256_storeu_pd(p, v.v); }

FundamentalLanes<Vd4> SplatF(const double* f) {
  return {Splat(f[0]), Splat(f[1]), Splat(f[2]), Splat(f[3]), Splat(f[4]),
          Splat(f[5]), Splat(f[6]), Splat(f[7]), Splat(f[8])};
}

HomographyLanes<Vd4> SplatH(const double* h) {
  return {Splat(h[0]), Splat(h[1]), Splat(h[2]), Splat(h[3]), Splat(h[4]),
          Splat(h[5]), Splat(h[6]), Splat(h[7]), Splat(h[8])};
}

}  // namespace

void SampsonAvx2(const BatchView& b, const double* f, double floor,
                 double* sd_point, double* sd_affine1, double* sd_affine2) {
  const FundamentalLanes<Vd4> lanes = SplatF(f);
  const Vd4 floor_v = Splat(floor);
  std::size_t i = 0;
  for (; i + 4 <= b.n; i += 4) {
    const SampsonTerms<Vd4> t =
        Sampson(lanes, Load(b.x1 + i), Load(b.y1 + i), Load(b.x2 + i),
                Load(b.y2 + i), Load(b.a11 + i), Load(b.a12 + i),
                Load(b.a21 + i), Load(b.a22 + i), floor_v);
    Store(sd_point + i, t.point);
    Store(sd_affine1 + i, t.affine1);
    Store(sd_affine2 + i, t.affine2);
  }
  if (i < b.n) {
    const BatchView tail{b.x1 + i,  b.y1 + i,  b.x2 + i,  b.y2 + i, b.a11 + i,
                         b.a12 + i, b.a21 + i, b.a22 + i, b.n - i};
    SampsonScalar(tail, f, floor, sd_point + i, sd_affine1 + i, sd_affine2 + i);
  }
}

void TransferAvx2(const BatchView& b, const double* h, const double* h_inv,
                  double* transfer_sq, double* affine_sq) {
  const HomographyLanes<Vd4> fwd = SplatH(h);
  const HomographyLanes<Vd4> bwd = SplatH(h_inv);
  const Vd4 floor = Splat(1e-12);
  const Vd4 half = Splat(0.5);
  std::size_t i = 0;
  for (; i + 4 <= b.n; i += 4) {
    const TransferTerms<Vd4> t =
        Transfer(fwd, bwd, Load(b.x1 + i), Load(b.y1 + i), Load(b.x2 + i),
                 Load(b.y2 + i), Load(b.a11 + i), Load(b.a12 + i),
                 Load(b.a21 + i), Load(b.a22 + i), floor, half);
    Store(transfer_sq + i, t.transfer_sq);
    Store(affine_sq + i, t.affine_sq);
  }
  if (i < b.n) {
    const BatchView tail{b.x1 + i,  b.y1 + i,  b.x2 + i,  b.y2 + i, b.a11 + i,
                         b.a12 + i, b.a21 + i, b.a22 + i, b.n - i};
    TransferScalar(tail, h, h_inv, transfer_sq + i, affine_sq + i);
  }
}

}  // namespace detail
}  // namespace acgeom::kernels
