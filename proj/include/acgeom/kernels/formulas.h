#pragma once

// Closed-form residual formulas shared by the single-item API and the batch
// kernels. Every formula is written once, templated on the lane type V
// (double for the scalar path, a SIMD wrapper for vector paths), so that all
// paths perform the same IEEE operations in the same order.
//
// V must provide +, -, *, / and the free functions
//   V RatioOrInf(V num, V den, V floor)   -> den <= floor ? +inf : num / den
//   V TransferOrInf(V w, V value, V floor) -> |w| <= floor ? +inf : value

#include <cmath>
#include <limits>

namespace acgeom::kernels {

inline double RatioOrInf(double num, double den, double floor) {
  return den <= floor ? std::numeric_limits<double>::infinity() : num / den;
}

inline double TransferOrInf(double w, double value, double floor) {
  return std::fabs(w) <= floor ? std::numeric_limits<double>::infinity()
                               : value;
}

template <class V>
struct FundamentalLanes {
  V f11, f12, f13, f21, f22, f23, f31, f32, f33;
};

template <class V>
struct SampsonTerms {
  V point;
  V affine1;
  V affine2;
};

template <class V>
inline V EpipolarZ0(const FundamentalLanes<V>& f, V x1, V y1, V x2, V y2) {
  const V z1 = f.f31 + f.f11 * x2 + f.f21 * y2;
  const V z2 = f.f32 + f.f12 * x2 + f.f22 * y2;
  return x1 * z1 + y1 * z2 + f.f13 * x2 + f.f23 * y2 + f.f33;
}

template <class V>
inline V AffineM0(const FundamentalLanes<V>& f, V x1, V y1, V x2, V y2, V a11,
                  V a21) {
  const V m5 = a11 * f.f11 + a21 * f.f21;
  const V m2 = a11 * f.f12 + a21 * f.f22;
  return x1 * m5 + y1 * m2 + a11 * f.f13 + a21 * f.f23 + f.f11 * x2 +
         f.f21 * y2 + f.f31;
}

template <class V>
inline V AffineN0(const FundamentalLanes<V>& f, V x1, V y1, V x2, V y2, V a12,
                  V a22) {
  const V n2 = a12 * f.f11 + a22 * f.f21;
  const V n5 = a12 * f.f12 + a22 * f.f22;
  return x1 * n2 + y1 * n5 + a12 * f.f13 + a22 * f.f23 + f.f12 * x2 +
         f.f22 * y2 + f.f32;
}

template <class V>
inline SampsonTerms<V> Sampson(const FundamentalLanes<V>& f, V x1, V y1, V x2,
                               V y2, V a11, V a12, V a21, V a22, V floor) {
  // Point constraint.
  const V z1 = f.f31 + f.f11 * x2 + f.f21 * y2;
  const V z2 = f.f32 + f.f12 * x2 + f.f22 * y2;
  const V z3 = f.f13 + f.f11 * x1 + f.f12 * y1;
  const V z4 = f.f23 + f.f21 * x1 + f.f22 * y1;
  const V z0 = x1 * z1 + y1 * z2 + f.f13 * x2 + f.f23 * y2 + f.f33;
  const V zden = z1 * z1 + z2 * z2 + z3 * z3 + z4 * z4;

  // First affine row; partials in (a11, y1, x2, a21, x1, y2).
  const V m1 = z3;
  const V m2 = a11 * f.f12 + a21 * f.f22;
  const V m3 = f.f11;
  const V m4 = z4;
  const V m5 = a11 * f.f11 + a21 * f.f21;
  const V m6 = f.f21;
  const V m0 = x1 * m5 + y1 * m2 + a11 * f.f13 + a21 * f.f23 + f.f11 * x2 +
               f.f21 * y2 + f.f31;
  const V mden = m1 * m1 + m2 * m2 + m3 * m3 + m4 * m4 + m5 * m5 + m6 * m6;

  // Second affine row; partials in (a12, x1, x2, a22, y1, y2).
  const V n1 = z3;
  const V n2 = a12 * f.f11 + a22 * f.f21;
  const V n3 = f.f12;
  const V n4 = z4;
  const V n5 = a12 * f.f12 + a22 * f.f22;
  const V n6 = f.f22;
  const V n0 = x1 * n2 + y1 * n5 + a12 * f.f13 + a22 * f.f23 + f.f12 * x2 +
               f.f22 * y2 + f.f32;
  const V nden = n1 * n1 + n2 * n2 + n3 * n3 + n4 * n4 + n5 * n5 + n6 * n6;

  return {RatioOrInf(z0 * z0, zden, floor), RatioOrInf(m0 * m0, mden, floor),
          RatioOrInf(n0 * n0, nden, floor)};
}

template <class V>
struct HomographyLanes {
  V h11, h12, h13, h21, h22, h23, h31, h32, h33;
};

template <class V>
struct TransferTerms {
  V transfer_sq;  // (d_forward^2 + d_backward^2) / 2, squared pixels
  V affine_sq;    // ||A - dH(p1)||_F^2
};

template <class V>
inline TransferTerms<V> Transfer(const HomographyLanes<V>& h,
                                 const HomographyLanes<V>& g, V x1, V y1, V x2,
                                 V y2, V a11, V a12, V a21, V a22, V floor,
                                 V half) {
  // Forward: p1 through H.
  const V w = h.h31 * x1 + h.h32 * y1 + h.h33;
  const V u = (h.h11 * x1 + h.h12 * y1 + h.h13) / w;
  const V v = (h.h21 * x1 + h.h22 * y1 + h.h23) / w;
  const V du = u - x2;
  const V dv = v - y2;
  const V fwd = du * du + dv * dv;

  // Backward: p2 through H^-1.
  const V wb = g.h31 * x2 + g.h32 * y2 + g.h33;
  const V ub = (g.h11 * x2 + g.h12 * y2 + g.h13) / wb;
  const V vb = (g.h21 * x2 + g.h22 * y2 + g.h23) / wb;
  const V dub = ub - x1;
  const V dvb = vb - y1;
  const V bwd = dub * dub + dvb * dvb;

  // Jacobian of the warp at p1.
  const V e11 = (h.h11 - u * h.h31) / w - a11;
  const V e12 = (h.h12 - u * h.h32) / w - a12;
  const V e21 = (h.h21 - v * h.h31) / w - a21;
  const V e22 = (h.h22 - v * h.h32) / w - a22;
  const V aff = e11 * e11 + e12 * e12 + e21 * e21 + e22 * e22;

  const V transfer =
      TransferOrInf(w, TransferOrInf(wb, (fwd + bwd) * half, floor), floor);
  return {transfer, TransferOrInf(w, aff, floor)};
}

}  // namespace acgeom::kernels
