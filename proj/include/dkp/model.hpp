#pragma once

// Physical model: the cusp potential V(x) = +/- v0 e^{-|x|/a}, the channel
// parameters it induces, and the three-component spinor built from one radial
// solution. Units: hbar = c = m = 1, energies in units of the mass.
//
// The first-order system behind the spinor is
//   d(psi)/dx = -phi,   d(phi)/dx = [(e - V)^2 - 1] psi,   theta = -i (e - V) psi,
// so psi obeys psi'' + [(e - V)^2 - 1] psi = 0. On each half-line the
// substitution u = 2 i a v e^{-|x|/a} (v signed) turns that into the Whittaker
// equation; the radial factor used everywhere below is f(u) = u^{-1/2} M(u).

#include <cmath>
#include <complex>
#include <string>

#include "dkp/errors.hpp"
#include "dkp/special_functions.hpp"

namespace dkp {

enum class PotentialKind { barrier, well };

struct CuspPotential {
  double a;    // shape length, > 0
  double v0;   // strength, > 0 (sign carried by kind)
  PotentialKind kind;

  CuspPotential(double a_, double v0_, PotentialKind kind_) : a(a_), v0(v0_), kind(kind_) {
    if (!(std::isfinite(a) && a > 0.0)) raise(errc::invalid_argument, "potential: a must be positive");
    if (!(std::isfinite(v0) && v0 > 0.0))
      raise(errc::invalid_argument, "potential: v0 must be positive");
    if (2.0 * a * v0 > kZMax)
      raise(errc::domain_too_large, "potential: 2 a v0 = " + std::to_string(2.0 * a * v0) +
                                        " outside the validated range (<= " + std::to_string(kZMax) + ")");
  }

  double signed_strength() const { return kind == PotentialKind::barrier ? v0 : -v0; }

  double value_at(double x) const { return signed_strength() * std::exp(-std::abs(x) / a); }
};

// integral of V over the line; finite support proxy, wells only
inline double bound_support_integral(const CuspPotential& pot) {
  if (pot.kind != PotentialKind::well)
    raise(errc::wrong_kind, "bound_support_integral: defined for wells");
  return -2.0 * pot.a * pot.v0;
}

struct EnergyPoint {
  double e;
};

// scattering channel: kappa = i a e, mu = i a sqrt(e^2 - 1)
struct ScatterParams {
  Complex kappa;
  Complex mu;
};

// bound channel (wells): kappa = -i a e, mu = a sqrt(1 - e^2) > 0
struct BoundParams {
  Complex kappa;
  double mu;
};

inline ScatterParams scatter_params(EnergyPoint ep, const CuspPotential& pot) {
  const double e = ep.e;
  if (!std::isfinite(e)) raise(errc::invalid_argument, "scatter_params: non-finite energy");
  if (e * e - 1.0 < 1e-6)
    raise(errc::klein_border,
          "scatter_params: e = " + std::to_string(e) +
              " has no propagating channel (requires e^2 - 1 >= 1e-6, outside the Klein zone)");
  return {Complex(0.0, pot.a * e), Complex(0.0, pot.a * std::sqrt(e * e - 1.0))};
}

inline BoundParams bound_params(EnergyPoint ep, const CuspPotential& pot) {
  if (pot.kind != PotentialKind::well)
    raise(errc::wrong_kind, "bound_params: bound states require a well");
  const double e = ep.e;
  if (!std::isfinite(e)) raise(errc::invalid_argument, "bound_params: non-finite energy");
  if (std::abs(e) >= 1.0 - 1e-6)
    raise(errc::mu_degenerate,
          "bound_params: |e| = " + std::to_string(std::abs(e)) + " too close to the continuum edge");
  return {Complex(0.0, -pot.a * e), pot.a * std::sqrt(1.0 - e * e)};
}

struct DkpSpinor {
  Complex psi;
  Complex phi;    // -d(psi)/dx
  Complex theta;  // -i (e - V) psi
};

namespace detail {

// Build the spinor carried by coeff * u^{-1/2} M_{kappa,m}(u) on one side.
// side = +1: u = w e^{+x/a} (left half-line), side = -1: u = w e^{-x/a}.
inline DkpSpinor cusp_spinor(double x, int side, Complex w, Complex kappa, Complex m,
                             const CuspPotential& pot, double e, Complex coeff) {
  const Complex u = w * std::exp(side * x / pot.a);
  const WhittakerParams p(kappa, m, u);
  const Complex mv = checked(whittaker_m(p));
  const Complex md = checked(whittaker_m_derivative(p));
  const Complex inv_sqrt_u = std::exp(-0.5 * std::log(u));
  const Complex f = inv_sqrt_u * mv;
  const Complex df_du = inv_sqrt_u * (md - mv / (2.0 * u));
  const Complex dpsi_dx = coeff * df_du * u * (static_cast<double>(side) / pot.a);
  const Complex psi = coeff * f;
  return {psi, -dpsi_dx, Complex(0.0, -1.0) * (e - pot.value_at(x)) * psi};
}

}  // namespace detail

// Scattering pieces. Incident and reflected live on x <= 0, transmitted on
// x >= 0; the reflected and transmitted waves carry the mirror index -mu.
inline DkpSpinor spinor_incident(double x, EnergyPoint ep, const CuspPotential& pot, Complex c1) {
  if (x > 0.0) raise(errc::invalid_argument, "spinor_incident: defined on x <= 0");
  const ScatterParams sp = scatter_params(ep, pot);
  const Complex w(0.0, 2.0 * pot.a * pot.signed_strength());
  return detail::cusp_spinor(x, +1, w, sp.kappa, sp.mu, pot, ep.e, c1);
}

inline DkpSpinor spinor_reflected(double x, EnergyPoint ep, const CuspPotential& pot, Complex c2) {
  if (x > 0.0) raise(errc::invalid_argument, "spinor_reflected: defined on x <= 0");
  const ScatterParams sp = scatter_params(ep, pot);
  const Complex w(0.0, 2.0 * pot.a * pot.signed_strength());
  return detail::cusp_spinor(x, +1, w, sp.kappa, -sp.mu, pot, ep.e, c2);
}

inline DkpSpinor spinor_transmitted(double x, EnergyPoint ep, const CuspPotential& pot, Complex c3) {
  if (x < 0.0) raise(errc::invalid_argument, "spinor_transmitted: defined on x >= 0");
  const ScatterParams sp = scatter_params(ep, pot);
  const Complex w(0.0, 2.0 * pot.a * pot.signed_strength());
  return detail::cusp_spinor(x, -1, w, sp.kappa, -sp.mu, pot, ep.e, c3);
}

// Bound pieces (wells): both halves decay through u^{mu} with real mu > 0,
// and the argument keeps the barrier-sign convention u = 2 i a v0 e^{-|x|/a}
// paired with kappa = -i a e.
inline DkpSpinor spinor_bound_left(double x, EnergyPoint ep, const CuspPotential& pot, Complex c) {
  if (x > 0.0) raise(errc::invalid_argument, "spinor_bound_left: defined on x <= 0");
  const BoundParams bp = bound_params(ep, pot);
  const Complex w(0.0, 2.0 * pot.a * pot.v0);
  return detail::cusp_spinor(x, +1, w, bp.kappa, bp.mu, pot, ep.e, c);
}

inline DkpSpinor spinor_bound_right(double x, EnergyPoint ep, const CuspPotential& pot, Complex c) {
  if (x < 0.0) raise(errc::invalid_argument, "spinor_bound_right: defined on x >= 0");
  const BoundParams bp = bound_params(ep, pot);
  const Complex w(0.0, 2.0 * pot.a * pot.v0);
  return detail::cusp_spinor(x, -1, w, bp.kappa, bp.mu, pot, ep.e, c);
}

}  // namespace dkp
