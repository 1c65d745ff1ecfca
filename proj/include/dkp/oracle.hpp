#pragma once

// Independent cross-check: direct integration of psi'' + [(e - V)^2 - 1] psi = 0
// with an adaptive Dormand-Prince 5(4) stepper. Nothing here touches the
// series solutions, so agreement with the analytic path is a real test.
//
// Scattering: impose a pure right-moving wave at the right edge, integrate to
// the left edge, decompose into incoming/reflected plane waves there.
// Bound states: integrate a decaying tail from the left edge to x = 0 and
// locate the energies where the symmetric matching condition psi'(0) = 0
// (or psi(0) = 0 for the antisymmetric family) changes sign.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "dkp/errors.hpp"
#include "dkp/model.hpp"

namespace dkp {

inline constexpr double kDefaultBoxFactor = 22.0;  // half-width in units of a
inline constexpr double kDefaultOracleTol = 1e-10;

struct OdeProblem {
  CuspPotential potential;
  double e;
  double x_left;
  double x_right;
  double tol;
};

inline OdeProblem make_ode_problem(const CuspPotential& pot, double e,
                                   double box_factor = kDefaultBoxFactor,
                                   double tol = kDefaultOracleTol) {
  if (!(tol >= 1e-12 && tol <= 1e-6))
    raise(errc::invalid_argument, "oracle: tol must lie in [1e-12, 1e-6]");
  if (!(box_factor >= 12.0))
    raise(errc::invalid_argument, "oracle: box must cover at least 12 shape lengths per side");
  return {pot, e, -box_factor * pot.a, box_factor * pot.a, tol};
}

enum class IntegrationDirection { forward, backward };

struct OdeSolution {
  std::vector<double> x;  // requested sample points, in traversal order
  std::vector<Complex> psi;
  std::vector<Complex> dpsi;
  Complex psi_end;
  Complex dpsi_end;
  double est_global_error = 0.0;  // accumulated local error estimates
};

namespace detail {

// One Dormand-Prince 5(4) step for y = (psi, dpsi). Returns the embedded
// error estimate scaled to the mixed tolerance.
struct KgStepper {
  const CuspPotential& pot;
  double e;

  void rhs(double x, const Complex y[2], Complex f[2]) const {
    const double v = pot.value_at(x);
    const double q = (e - v) * (e - v) - 1.0;
    f[0] = y[1];
    f[1] = -q * y[0];
  }
};

inline OdeSolution integrate_kg_impl(const OdeProblem& prob, Complex psi0, Complex dpsi0,
                                     IntegrationDirection dir, std::vector<double> samples) {
  const double x_start = dir == IntegrationDirection::forward ? prob.x_left : prob.x_right;
  const double x_stop = dir == IntegrationDirection::forward ? prob.x_right : prob.x_left;
  const double span = x_stop - x_start;  // signed
  for (double s : samples)
    if (s < prob.x_left || s > prob.x_right)
      raise(errc::invalid_argument, "integrate_kg: sample point outside the box");
  std::sort(samples.begin(), samples.end());
  if (dir == IntegrationDirection::backward) std::reverse(samples.begin(), samples.end());

  // target the requested accuracy globally; the per-step budget is tighter
  const double rtol = prob.tol / 10.0;
  const double atol = rtol;

  static constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double kA[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  };
  // 5th-order weights equal kA[6]; embedded 4th-order weights:
  static constexpr double kB4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  KgStepper stepper{prob.potential, prob.e};
  OdeSolution sol;
  sol.x.reserve(samples.size());

  Complex y[2] = {psi0, dpsi0};
  Complex k[7][2];
  stepper.rhs(x_start, y, k[0]);
  double x = x_start;
  const double dir_sign = span >= 0.0 ? 1.0 : -1.0;
  double h = dir_sign * std::min(0.1, std::abs(span) / 10.0);
  const double h_min = std::abs(span) * 1e-14;
  size_t next_sample = 0;
  const double x_eps = std::abs(span) * 1e-14;
  while (next_sample < samples.size() && std::abs(samples[next_sample] - x) <= x_eps) {
    sol.x.push_back(samples[next_sample]);
    sol.psi.push_back(y[0]);
    sol.dpsi.push_back(y[1]);
    ++next_sample;
  }

  int guard = 0;
  while (dir_sign * (x_stop - x) > x_eps) {
    if (++guard > 2000000) raise(errc::no_convergence, "integrate_kg: step count exploded");
    bool hit_sample = false;
    if (dir_sign * (x + h - x_stop) > 0.0) h = x_stop - x;
    if (next_sample < samples.size() &&
        dir_sign * (x + h - samples[next_sample]) >= 0.0) {
      h = samples[next_sample] - x;
      hit_sample = true;
    }
    if (std::abs(h) < h_min)
      raise(errc::step_underflow, "integrate_kg: step size collapsed at x = " + std::to_string(x));

    Complex y_stage[2], y5[2], y4[2];
    for (int s = 1; s < 7; ++s) {
      for (int c = 0; c < 2; ++c) {
        Complex acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][c];
        y_stage[c] = y[c] + h * acc;
      }
      stepper.rhs(x + kC[s] * h, y_stage, k[s]);
    }
    for (int c = 0; c < 2; ++c) {
      y5[c] = y_stage[c];  // stage 7 state is the 5th-order solution (FSAL)
      Complex acc = 0.0;
      for (int j = 0; j < 7; ++j) acc += kB4[j] * k[j][c];
      y4[c] = y[c] + h * acc;
    }
    double err = 0.0;
    bool finite = true;
    for (int c = 0; c < 2; ++c) {
      const double sc = atol + rtol * std::max(std::abs(y[c]), std::abs(y5[c]));
      const double d = std::abs(y5[c] - y4[c]);
      if (!std::isfinite(d) || !std::isfinite(std::abs(y5[c]))) finite = false;
      err = std::max(err, d / sc);
    }
    if (!finite || !(err == err)) err = 2.0;  // non-finite state: force rejection

    if (err <= 1.0) {
      x += h;
      y[0] = y5[0];
      y[1] = y5[1];
      k[0][0] = k[6][0];
      k[0][1] = k[6][1];
      sol.est_global_error += err * rtol;
      if (hit_sample) {
        // several samples may coincide
        while (next_sample < samples.size() && std::abs(samples[next_sample] - x) <= x_eps) {
          sol.x.push_back(samples[next_sample]);
          sol.psi.push_back(y[0]);
          sol.dpsi.push_back(y[1]);
          ++next_sample;
        }
      }
    }
    const double shrink = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(shrink, 0.2, 5.0);
    if (std::abs(h) > std::abs(span)) h = dir_sign * std::abs(span);
  }
  sol.psi_end = y[0];
  sol.dpsi_end = y[1];
  return sol;
}

}  // namespace detail

inline OdeSolution integrate_kg(const OdeProblem& prob, Complex psi0, Complex dpsi0,
                                IntegrationDirection dir, std::vector<double> samples = {}) {
  return detail::integrate_kg_impl(prob, psi0, dpsi0, dir, std::move(samples));
}

// Local decomposition psi = A e^{ikx} + B e^{-ikx} read off from (psi, psi').
struct FluxDecomposition {
  Complex amp_right;  // A
  Complex amp_left;   // B
};

inline FluxDecomposition decompose_plane_waves(Complex psi, Complex dpsi, double x, double k) {
  if (!(k > 0.0)) raise(errc::invalid_argument, "decompose_plane_waves: k must be positive");
  const Complex ik(0.0, k);
  const Complex phase = std::exp(ik * x);
  const Complex a = (dpsi + ik * psi) / (2.0 * ik) / phase;
  const Complex b = (ik * psi - dpsi) / (2.0 * ik) * phase;
  return {a, b};
}

struct OracleRt {
  double r;
  double t;
};

inline OracleRt oracle_rt(const OdeProblem& prob) {
  const double e = prob.e;
  if (e * e - 1.0 < 1e-6)
    raise(errc::klein_border, "oracle_rt: no propagating channel at e = " + std::to_string(e));
  const double kk = std::sqrt(e * e - 1.0);
  const Complex ik(0.0, kk);
  const Complex psi_r = std::exp(ik * prob.x_right);
  const OdeSolution sol = integrate_kg(prob, psi_r, ik * psi_r, IntegrationDirection::backward);
  const FluxDecomposition fd = decompose_plane_waves(sol.psi_end, sol.dpsi_end, prob.x_left, kk);
  const double r = std::norm(fd.amp_left) / std::norm(fd.amp_right);
  const double t = 1.0 / std::norm(fd.amp_right);
  if (!(std::abs(r + t - 1.0) <= 100.0 * prob.tol)) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3e", r + t - 1.0);
    raise(errc::unitarity_violation, std::string("oracle flux defect ") + buf + " beyond 100*tol");
  }
  return {r, t};
}

enum class Parity { even, odd };

// Energies of decaying-tail states found by shooting from the left edge to
// x = 0 and bisecting sign changes of the parity condition there.
inline std::vector<double> oracle_bound_energies(const CuspPotential& pot,
                                                 Parity parity = Parity::even,
                                                 double box_factor = kDefaultBoxFactor,
                                                 double tol = kDefaultOracleTol,
                                                 int n_grid = 400) {
  if (pot.kind != PotentialKind::well)
    raise(errc::wrong_kind, "oracle_bound_energies: bound states require a well");
  if (n_grid < 8) raise(errc::empty_grid, "oracle_bound_energies: grid too small");
  if (!(tol >= 1e-12 && tol <= 1e-6))
    raise(errc::invalid_argument, "oracle_bound_energies: tol must lie in [1e-12, 1e-6]");
  if (!(box_factor >= 12.0))
    raise(errc::invalid_argument, "oracle_bound_energies: box must cover at least 12 shape lengths");

  const auto condition = [&](double e) {
    const double lambda = std::sqrt(1.0 - e * e);
    // widen the box until the tail truncation is negligible for this e
    const double half = std::max(box_factor * pot.a, 9.0 / lambda);
    const OdeProblem prob{pot, e, -half, 0.0, tol};
    const OdeSolution sol =
        integrate_kg(prob, Complex(1.0, 0.0), Complex(lambda, 0.0), IntegrationDirection::forward);
    const double norm = std::max(std::abs(sol.psi_end), std::abs(sol.dpsi_end));
    const double raw =
        parity == Parity::even ? sol.dpsi_end.real() : sol.psi_end.real();
    return raw / norm;
  };

  const double cap = 1.0 - 1e-4;
  std::vector<double> es(n_grid), vals(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    es[i] = -cap + 2.0 * cap * i / (n_grid - 1);
    vals[i] = condition(es[i]);
  }
  std::vector<double> roots;
  for (int i = 0; i + 1 < n_grid; ++i) {
    if (!(vals[i] == 0.0) && !(vals[i] * vals[i + 1] < 0.0)) continue;
    double lo = es[i], hi = es[i + 1];
    double flo = vals[i];
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      const double fm = condition(mid);
      if (flo * fm <= 0.0) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  return roots;
}

}  // namespace dkp
