#pragma once

// Bound states of the cusp well. Symmetric states satisfy phi(0) = 0, which
// for the radial factor f(u) = u^{-1/2} M_{kappa,mu}(u) at u0 = 2 i a v0 reads
//   (1 + 2 kappa - u0) M_{kappa,mu}(u0) - (1 + 2 kappa + 2 mu) M_{kappa+1,mu}(u0) = 0.
// Roots in e are located by a grid scan of the relative residual followed by
// golden-section minimization of |value|.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dkp/detail/parallel.hpp"
#include "dkp/errors.hpp"
#include "dkp/model.hpp"

namespace dkp {

struct EnergyEquationValue {
  Complex value;
  double scale;  // max modulus of the two terms; use |value|/scale as residual
};

inline EnergyEquationValue energy_equation(EnergyPoint ep, const CuspPotential& pot) {
  const BoundParams bp = bound_params(ep, pot);
  const Complex u0(0.0, 2.0 * pot.a * pot.v0);
  const Complex m0 = checked(whittaker_m(WhittakerParams(bp.kappa, bp.mu, u0)));
  const Complex m1 = checked(whittaker_m(WhittakerParams(bp.kappa + 1.0, bp.mu, u0)));
  const Complex t1 = (1.0 + 2.0 * bp.kappa - u0) * m0;
  const Complex t2 = (1.0 + 2.0 * bp.kappa + 2.0 * bp.mu) * m1;
  return {t1 - t2, std::max(std::abs(t1), std::abs(t2))};
}

struct BoundState {
  double v0;
  double e;
  double residual;  // |value| / scale at the accepted root
};

// Scan (-1 + 1e-4, 1 - 1e-4) on n_grid points, then refine each candidate dip.
inline std::vector<BoundState> find_bound_states(const CuspPotential& pot, int n_grid = 600) {
  if (pot.kind != PotentialKind::well)
    raise(errc::wrong_kind, "find_bound_states: bound states require a well");
  if (n_grid < 8) raise(errc::empty_grid, "find_bound_states: grid too small");

  const double cap = 1.0 - 1e-4;
  const auto e_at = [&](int i) { return -cap + 2.0 * cap * i / (n_grid - 1); };
  std::vector<double> rel(n_grid, std::numeric_limits<double>::infinity());
  detail::parallel_for(n_grid, [&](int i) {
    try {
      const EnergyEquationValue v = energy_equation({e_at(i)}, pot);
      rel[i] = std::abs(v.value) / v.scale;
    } catch (const Error&) {
      // leave the point unusable; neighbors still participate
    }
  });

  const auto abs_val = [&](double e) {
    const EnergyEquationValue v = energy_equation({e}, pot);
    return std::abs(v.value);
  };
  constexpr double inv_gold = 0.6180339887498949;
  std::vector<BoundState> states;
  for (int i = 1; i + 1 < n_grid; ++i) {
    if (!(rel[i] <= rel[i - 1] && rel[i] <= rel[i + 1] && rel[i] < 0.5)) continue;
    double lo = e_at(i - 1), hi = e_at(i + 1);
    try {
      double c = hi - inv_gold * (hi - lo), d = lo + inv_gold * (hi - lo);
      double fc = abs_val(c), fd = abs_val(d);
      while (hi - lo > 1e-10) {
        if (fc < fd) {
          hi = d; d = c; fd = fc;
          c = hi - inv_gold * (hi - lo);
          fc = abs_val(c);
        } else {
          lo = c; c = d; fc = fd;
          d = lo + inv_gold * (hi - lo);
          fd = abs_val(d);
        }
      }
      const double e_root = 0.5 * (lo + hi);
      const EnergyEquationValue v = energy_equation({e_root}, pot);
      const double res = std::abs(v.value) / v.scale;
      // accept only genuine zeros, not shallow dips of the modulus
      if (res <= 1e-8 && std::abs(v.value.real()) <= 1e-7 * v.scale &&
          std::abs(v.value.imag()) <= 1e-7 * v.scale) {
        if (states.empty() || e_root - states.back().e > 1e-9)
          states.push_back({pot.v0, e_root, res});
      }
    } catch (const Error&) {
      // candidate wandered against a guard; skip it
    }
  }
  return states;
}

struct TurningPoint {
  double v0;
  double e;
};

struct SpectrumTrace {
  std::vector<BoundState> points;  // ascending v0, then ascending e
  std::optional<TurningPoint> turning_point;
  bool low_confidence = false;  // grid too coarse to trust the turning point
};

// Follow the spectrum over a strength grid and bisect the depth where the
// last pair of states merges and disappears.
inline SpectrumTrace trace_spectrum(double a, double v_min, double v_max, int n,
                                    int n_grid = 600) {
  if (n < 2) raise(errc::empty_grid, "trace_spectrum: need at least 2 grid points");
  if (!(v_min > 0.0 && v_min < v_max))
    raise(errc::invalid_argument, "trace_spectrum: need 0 < v_min < v_max");

  SpectrumTrace trace;
  trace.low_confidence = n < 50;
  std::vector<std::vector<BoundState>> per_depth(n);
  detail::parallel_for(n, [&](int i) {
    const double v = v_min + (v_max - v_min) * i / (n - 1);
    try {
      per_depth[i] = find_bound_states(CuspPotential(a, v, PotentialKind::well), n_grid);
    } catch (const Error&) {
      // depth outside the usable range; recorded as no states
    }
  });
  for (auto& states : per_depth)
    trace.points.insert(trace.points.end(), states.begin(), states.end());

  // last populated -> empty transition marks the fold
  int last_full = -1;
  for (int i = 0; i + 1 < n; ++i)
    if (!per_depth[i].empty() && per_depth[i + 1].empty()) last_full = i;
  if (last_full < 0) return trace;

  const auto v_at = [&](int i) { return v_min + (v_max - v_min) * i / (n - 1); };
  double lo = v_at(last_full), hi = v_at(last_full + 1);
  std::optional<std::pair<double, double>> last_pair;  // (v0, midpoint e)
  const auto remember = [&](double v, const std::vector<BoundState>& states) {
    if (states.size() >= 2)
      last_pair = {v, 0.5 * (states[states.size() - 2].e + states.back().e)};
  };
  remember(lo, per_depth[last_full]);
  double last_single = per_depth[last_full].back().e;
  while (hi - lo > 1e-5) {
    const double mid = 0.5 * (lo + hi);
    std::vector<BoundState> states;
    try {
      states = find_bound_states(CuspPotential(a, mid, PotentialKind::well), n_grid);
    } catch (const Error&) {
      states.clear();
    }
    if (states.empty()) {
      hi = mid;
    } else {
      lo = mid;
      remember(mid, states);
      last_single = states.back().e;
    }
  }
  TurningPoint tp;
  tp.v0 = 0.5 * (lo + hi);
  tp.e = last_pair ? last_pair->second : last_single;
  trace.turning_point = tp;
  return trace;
}

}  // namespace dkp
