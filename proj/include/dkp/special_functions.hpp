#pragma once

// Confluent hypergeometric machinery: Kummer M series, Whittaker M/W, complex
// gamma. Everything is evaluated on the principal branch; arguments are
// restricted to |z| <= kZMax where the direct series is validated.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "dkp/detail/double_double.hpp"
#include "dkp/errors.hpp"

namespace dkp {

using Complex = std::complex<double>;

inline constexpr double kTolSeries = 1e-14;  // relative term size at which the series stops
inline constexpr int kMaxSeriesTerms = 500;
inline constexpr double kTolAccept = 1e-9;  // worst est_error checked() lets through
inline constexpr double kZMax = 30.0;       // validated argument range for the series
inline constexpr double kMuFloor = 1e-6;    // smallest usable |2 mu|

// Outcome of a series evaluation. est_error is a relative bound combining the
// accumulation rounding (scaled by the cancellation actually encountered) and
// the truncation remainder.
struct EvalReport {
  Complex value;
  double est_error = 0.0;
  int terms_used = 0;
};

// Lanczos approximation, g = 607/128, 15 terms: ~13 correct digits on the
// right half-plane, reflection handles the rest.
inline Complex gamma_complex(Complex z) {
  constexpr double g = 4.7421875;
  constexpr double c[15] = {
      0.99999999999999709182,     57.156235665862923517,
      -59.597960355475491248,     14.136097974741747174,
      -0.49191381609762019978,    0.33994649984811888699e-4,
      0.46523628927048575665e-4,  -0.98374475304879564677e-4,
      0.15808870322491248884e-3,  -0.21026444172410488319e-3,
      0.21743961811521264320e-3,  -0.16431810653676389022e-3,
      0.84418223983852743293e-4,  -0.26190838401581408670e-4,
      0.36899182659531622704e-5,
  };
  constexpr double pi = std::numbers::pi_v<double>;
  if (z.real() < 0.5) {
    // reflection formula; at the poles sin(pi z) ~ 0 gives a huge value, and
    // gamma_reciprocal() is the clean way to ask for those points
    return pi / (std::sin(pi * z) * gamma_complex(1.0 - z));
  }
  Complex zm = z - 1.0;
  Complex s = c[0];
  for (int k = 1; k < 15; ++k) s += c[k] / (zm + static_cast<double>(k));
  Complex t = zm + (g + 0.5);
  return std::sqrt(2.0 * pi) * std::pow(t, zm + 0.5) * std::exp(-t) * s;
}

// 1/gamma with the poles mapped to an exact zero.
inline Complex gamma_reciprocal(Complex z) {
  double zr = std::round(z.real());
  if (zr <= 0.0 && std::abs(z.real() - zr) <= 1e-12 * std::max(1.0, -zr) &&
      std::abs(z.imag()) <= 1e-12) {
    return {0.0, 0.0};
  }
  return 1.0 / gamma_complex(z);
}

namespace detail {

inline bool near_nonpositive_integer(Complex b) {
  double br = std::round(b.real());
  return br <= 0.0 && std::abs(b.real() - br) <= 1e-12 * std::max(1.0, -br) &&
         std::abs(b.imag()) <= 1e-12;
}

inline bool near_integer(Complex x) {
  return std::abs(x.real() - std::round(x.real())) <= 1e-12 * std::max(1.0, std::abs(x.real())) &&
         std::abs(x.imag()) <= 1e-12;
}

}  // namespace detail

// M(a, b, z) by direct summation in compensated arithmetic.
inline EvalReport kummer_m(Complex a, Complex b, Complex z) {
  const double az = std::abs(z);
  if (az > kZMax)
    raise(errc::domain_too_large, "kummer_m: |z| = " + std::to_string(az) +
                                      " outside the validated range |z| <= " + std::to_string(kZMax));
  if (detail::near_nonpositive_integer(b))
    raise(errc::pole_parameter, "kummer_m: b is a non-positive integer");

  using detail::cdd;
  cdd term = detail::to_cdd(1.0);
  cdd sum = term;
  const cdd ac = detail::to_cdd(a);
  const cdd bc = detail::to_cdd(b);
  const cdd zc = detail::to_cdd(z);
  double abs_sum = 1.0;
  double last_rel = 1.0;
  int terms = 1;
  int settled = 0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    // t_{n+1} = t_n (a+n) z / ((b+n)(n+1))
    term = detail::mul(term, detail::mul(detail::add(ac, static_cast<double>(n)), zc));
    term = detail::mul(term, detail::recip(detail::add(bc, static_cast<double>(n))));
    term = detail::div(term, static_cast<double>(n + 1));
    sum = detail::add(sum, term);
    ++terms;
    const double at = detail::abs_est(term);
    abs_sum += at;
    const double asum = std::max(detail::abs_est(sum), std::numeric_limits<double>::min());
    last_rel = at / asum;
    // require two consecutive small terms past the growth hump at n ~ |z|
    if (last_rel <= kTolSeries && terms >= az) {
      if (++settled >= 2) break;
    } else {
      settled = 0;
    }
  }
  if (settled < 2)
    raise(errc::no_convergence,
          "kummer_m: series did not settle within " + std::to_string(kMaxSeriesTerms) + " terms");

  const Complex value = detail::to_complex(sum);
  const double av = std::max(std::abs(value), std::numeric_limits<double>::min());
  const double amplification = abs_sum / av;
  const double est = amplification * terms * detail::kDdEps + last_rel +
                     2.0 * std::numeric_limits<double>::epsilon();
  return {value, est, terms};
}

// Validated parameter set for the Whittaker functions.
struct WhittakerParams {
  Complex kappa;
  Complex mu;
  Complex z;

  WhittakerParams(Complex kappa_, Complex mu_, Complex z_) : kappa(kappa_), mu(mu_), z(z_) {
    const double az = std::abs(z);
    if (!(az > 0.0)) raise(errc::invalid_argument, "whittaker: z must be nonzero");
    if (az > kZMax)
      raise(errc::domain_too_large, "whittaker: |z| = " + std::to_string(az) +
                                        " outside the validated range |z| <= " + std::to_string(kZMax));
    if (z.real() < 0.0 && std::abs(z.imag()) <= 1e-14 * az)
      raise(errc::branch_ambiguity,
            "whittaker: z on the negative real axis sits on the principal branch cut");
    if (std::abs(2.0 * mu) < kMuFloor)
      raise(errc::mu_degenerate, "whittaker: |2 mu| below " + std::to_string(kMuFloor) +
                                     ", the two solutions degenerate");
    if (detail::near_nonpositive_integer(1.0 + 2.0 * mu))
      raise(errc::pole_parameter, "whittaker: 1 + 2 mu is a non-positive integer");
  }
};

// M_{kappa,mu}(z) = e^{-z/2} z^{1/2+mu} M(1/2+mu-kappa, 1+2mu, z)
inline EvalReport whittaker_m(const WhittakerParams& p) {
  EvalReport m = kummer_m(0.5 + p.mu - p.kappa, 1.0 + 2.0 * p.mu, p.z);
  const Complex lg = std::log(p.z);
  const Complex pref = std::exp(-0.5 * p.z + (0.5 + p.mu) * lg);
  const double pref_err =
      (0.5 * std::abs(p.z) + std::abs((0.5 + p.mu) * lg) + 2.0) * std::numeric_limits<double>::epsilon();
  return {pref * m.value, m.est_error + pref_err, m.terms_used};
}

// dM/dz via the kappa -> kappa+1 contiguous relation:
//   M' = (1/2 - kappa/z) M_{kappa,mu} + (1/2 + mu + kappa)/z M_{kappa+1,mu}
inline EvalReport whittaker_m_derivative(const WhittakerParams& p) {
  EvalReport m0 = whittaker_m(p);
  EvalReport m1 = whittaker_m(WhittakerParams(p.kappa + 1.0, p.mu, p.z));
  const Complex t0 = (0.5 - p.kappa / p.z) * m0.value;
  const Complex t1 = ((0.5 + p.mu + p.kappa) / p.z) * m1.value;
  const Complex value = t0 + t1;
  const double av = std::max(std::abs(value), std::numeric_limits<double>::min());
  const double amplification = (std::abs(t0) + std::abs(t1)) / av;
  const double est = amplification * (std::max(m0.est_error, m1.est_error) +
                                      2.0 * std::numeric_limits<double>::epsilon());
  return {value, est, m0.terms_used + m1.terms_used};
}

// W_{kappa,mu}(z) from the M pair. Reciprocal gammas keep the benign case of
// a pole in a denominator (the corresponding term drops out) well-defined.
inline EvalReport whittaker_w(const WhittakerParams& p) {
  if (detail::near_integer(2.0 * p.mu))
    raise(errc::logarithmic_case,
          "whittaker_w: 2 mu is an integer; the M pair is degenerate and this "
          "expansion does not apply");
  EvalReport mp = whittaker_m(p);
  EvalReport mn = whittaker_m(WhittakerParams(p.kappa, -p.mu, p.z));
  const Complex cp = gamma_complex(-2.0 * p.mu) * gamma_reciprocal(0.5 - p.mu - p.kappa);
  const Complex cn = gamma_complex(2.0 * p.mu) * gamma_reciprocal(0.5 + p.mu - p.kappa);
  const Complex t0 = cp * mp.value;
  const Complex t1 = cn * mn.value;
  const Complex value = t0 + t1;
  const double av = std::max(std::abs(value), std::numeric_limits<double>::min());
  const double amplification = (std::abs(t0) + std::abs(t1)) / av;
  // ~1e-13 covers the Lanczos gamma factors
  const double est = amplification * (std::max(mp.est_error, mn.est_error) + 1e-13);
  return {value, est, mp.terms_used + mn.terms_used};
}

// Gate an evaluation on its own error estimate.
inline Complex checked(const EvalReport& r) {
  if (!(r.est_error <= kTolAccept))
    raise(errc::accuracy_loss,
          "estimated relative error " + std::to_string(r.est_error) + " exceeds " +
              std::to_string(kTolAccept));
  return r.value;
}

}  // namespace dkp
