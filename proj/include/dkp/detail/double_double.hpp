#pragma once

// Compensated (double-double) arithmetic for the confluent series.
//
// On the imaginary axis the series terms cancel down by a factor ~e^{|z|}, so
// a plain double accumulation loses up to ~12 digits at |z| = 30. Carrying a
// two-component accumulator keeps the rounding floor near 5e-32 and makes the
// cancellation harmless; the result is rounded back to double at the end.

#include <cmath>
#include <complex>

namespace dkp::detail {

inline constexpr double kDdEps = 4.93e-32;  // (2^-52)^2, accumulation floor

struct dd {
  double hi = 0.0;
  double lo = 0.0;
};

// requires |a| >= |b| or a == 0
inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_sum(double a, double b) {
  double s = a + b;
  double v = s - a;
  return {s, (a - (s - v)) + (b - v)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

inline dd add(dd a, double b) {
  dd s = two_sum(a.hi, b);
  return quick_two_sum(s.hi, s.lo + a.lo);
}

inline dd mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  return quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

inline dd mul(dd a, double b) {
  dd p = two_prod(a.hi, b);
  return quick_two_sum(p.hi, p.lo + a.lo * b);
}

inline dd div(dd a, double b) {
  double q1 = a.hi / b;
  dd p = two_prod(q1, b);
  double r = ((a.hi - p.hi) - p.lo + a.lo) / b;
  return quick_two_sum(q1, r);
}

struct cdd {
  dd re;
  dd im;
};

inline cdd to_cdd(std::complex<double> z) {
  return {{z.real(), 0.0}, {z.imag(), 0.0}};
}

inline std::complex<double> to_complex(cdd z) {
  return {z.re.hi + z.re.lo, z.im.hi + z.im.lo};
}

inline cdd add(cdd a, cdd b) { return {add(a.re, b.re), add(a.im, b.im)}; }

inline cdd add(cdd a, double b) { return {add(a.re, b), a.im}; }

inline cdd mul(cdd a, cdd b) {
  dd re = add(mul(a.re, b.re), mul(mul(a.im, b.im), -1.0));
  dd im = add(mul(a.re, b.im), mul(a.im, b.re));
  return {re, im};
}

inline cdd mul(cdd a, double b) { return {mul(a.re, b), mul(a.im, b)}; }

inline cdd div(cdd a, double b) { return {div(a.re, b), div(a.im, b)}; }

// reciprocal via one Newton step from the double estimate: full dd accuracy
inline cdd recip(cdd b) {
  std::complex<double> r0 = 1.0 / std::complex<double>(b.re.hi, b.im.hi);
  cdd r = to_cdd(r0);
  cdd e = mul(b, r);  // 1 + O(eps)
  cdd one_minus_e{add(mul(e.re, -1.0), 1.0), mul(e.im, -1.0)};
  return add(r, mul(r, one_minus_e));
}

inline double abs_est(cdd z) { return std::hypot(z.re.hi, z.im.hi); }

}  // namespace dkp::detail
