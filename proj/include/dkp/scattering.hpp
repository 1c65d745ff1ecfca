#pragma once

// Scattering off the cusp: match the incident+reflected combination against
// the transmitted wave at x = 0, then read off R and T from the coefficient
// moduli. The 2x2 system is solved by Cramer's rule; both spinor components
// that matter (psi and its slope) are matched, the third follows identically.

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

struct MatchingSolution {
  Complex c2_over_c1;
  Complex c3_over_c1;
  double residual;  // worst relative component mismatch at x = 0
};

namespace detail {

struct RadialPair {
  Complex f;   // u^{-1/2} M at u0
  Complex df;  // d/du of the same
};

inline RadialPair radial_pair(Complex kappa, Complex m, Complex u0) {
  const WhittakerParams p(kappa, m, u0);
  const Complex mv = checked(whittaker_m(p));
  const Complex md = checked(whittaker_m_derivative(p));
  const Complex inv_sqrt = std::exp(-0.5 * std::log(u0));
  return {inv_sqrt * mv, inv_sqrt * (md - mv / (2.0 * u0))};
}

// Matching with explicit one-side values; exposed so tests can probe the
// system with swapped roles.
inline MatchingSolution match_at_origin(const RadialPair& inc, const RadialPair& ref,
                                        const RadialPair& trans) {
  // psi continuity:   c2 ref.f - c3 trans.f = -inc.f
  // slope continuity: c2 ref.df + c3 trans.df = -inc.df
  //   (the transmitted side carries the opposite du/dx sign)
  const Complex a11 = ref.f, a12 = -trans.f;
  const Complex a21 = ref.df, a22 = trans.df;
  const Complex b1 = -inc.f, b2 = -inc.df;
  const Complex det = a11 * a22 - a12 * a21;
  const double det_scale = std::max(std::abs(a11 * a22), std::abs(a12 * a21));
  if (!(std::abs(det) > 1e-12 * det_scale))
    raise(errc::singular_matching, "matching system is numerically singular");
  const Complex c2 = (b1 * a22 - a12 * b2) / det;
  const Complex c3 = (a11 * b2 - b1 * a21) / det;

  // residuals of the two continuity equations, relative to the largest term
  const Complex psi_gap = inc.f + c2 * ref.f - c3 * trans.f;
  const double psi_scale = std::max({std::abs(inc.f), std::abs(c2 * ref.f), std::abs(c3 * trans.f),
                                     std::numeric_limits<double>::min()});
  const Complex slope_gap = inc.df + c2 * ref.df + c3 * trans.df;
  const double slope_scale =
      std::max({std::abs(inc.df), std::abs(c2 * ref.df), std::abs(c3 * trans.df),
                std::numeric_limits<double>::min()});
  const double residual =
      std::max(std::abs(psi_gap) / psi_scale, std::abs(slope_gap) / slope_scale);
  if (!(residual <= 1e-9))
    raise(errc::accuracy_loss, "matching residual " + std::to_string(residual) + " above 1e-9");
  return {c2, c3, residual};
}

}  // namespace detail

inline MatchingSolution solve_matching(EnergyPoint ep, const CuspPotential& pot) {
  const ScatterParams sp = scatter_params(ep, pot);
  const Complex u0(0.0, 2.0 * pot.a * pot.signed_strength());
  const detail::RadialPair inc = detail::radial_pair(sp.kappa, sp.mu, u0);
  const detail::RadialPair ref = detail::radial_pair(sp.kappa, -sp.mu, u0);
  // the transmitted wave is the same radial function evaluated at the same u0
  return detail::match_at_origin(inc, ref, ref);
}

struct ScatteringResult {
  double e;
  double r;
  double t;
  MatchingSolution matching;
};

inline ScatteringResult reflection_transmission(EnergyPoint ep, const CuspPotential& pot) {
  const MatchingSolution ms = solve_matching(ep, pot);
  const ScatterParams sp = scatter_params(ep, pot);
  const Complex u0(0.0, 2.0 * pot.a * pot.signed_strength());
  // asymptotic normalization: the plane-wave amplitudes carry u0^{+mu} for the
  // incident piece and u0^{-mu} for reflected/transmitted; only moduli matter
  const Complex lg = std::log(u0);
  const double mod_ratio = std::abs(std::exp(-sp.mu * lg)) / std::abs(std::exp(sp.mu * lg));
  const double r = std::norm(ms.c2_over_c1) * mod_ratio * mod_ratio;
  const double t = std::norm(ms.c3_over_c1) * mod_ratio * mod_ratio;
  if (!(std::abs(r + t - 1.0) <= 1e-8))
    raise(errc::unitarity_violation,
          "R + T - 1 = " + std::to_string(r + t - 1.0) + " beyond 1e-8");
  return {ep.e, r, t, ms};
}

// One grid point of a sweep; failed points keep NaNs and carry the failure
// category in status.
struct SweepPoint {
  double param = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double t = std::numeric_limits<double>::quiet_NaN();
  double unitarity_defect = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

inline std::vector<SweepPoint> sweep_energy(const CuspPotential& pot, double e_min, double e_max,
                                            int n) {
  if (n < 2) raise(errc::empty_grid, "sweep_energy: need at least 2 grid points");
  if (!(e_min < e_max)) raise(errc::invalid_argument, "sweep_energy: need e_min < e_max");
  std::vector<SweepPoint> out(n);
  detail::parallel_for(n, [&](int i) {
    const double e = e_min + (e_max - e_min) * i / (n - 1);
    out[i].param = e;
    try {
      const ScatteringResult rt = reflection_transmission({e}, pot);
      out[i].r = rt.r;
      out[i].t = rt.t;
      out[i].unitarity_defect = std::abs(rt.r + rt.t - 1.0);
    } catch (const Error& err) {
      out[i].status = errc_name(err.code());
    }
  });
  return out;
}

// Transmission versus barrier strength at fixed energy, with golden-section
// refinement of every local maximum that reaches T >= 1 - 1e-3.
struct ScanSample {
  double v0 = std::numeric_limits<double>::quiet_NaN();
  double t = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

struct ResonanceScan {
  std::vector<ScanSample> samples;
  std::vector<double> peaks;     // refined strengths
  std::vector<double> peak_t;    // transmission at each peak
  std::vector<double> spacings;  // successive peak differences
};

inline ResonanceScan scan_resonances_vs_strength(double a, EnergyPoint e, double v_min,
                                                 double v_max, int n) {
  if (n < 2) raise(errc::empty_grid, "scan_resonances_vs_strength: need at least 2 grid points");
  if (!(v_min > 0.0 && v_min < v_max))
    raise(errc::invalid_argument, "scan_resonances_vs_strength: need 0 < v_min < v_max");

  ResonanceScan scan;
  scan.samples.resize(n);
  detail::parallel_for(n, [&](int i) {
    const double v = v_min + (v_max - v_min) * i / (n - 1);
    scan.samples[i].v0 = v;
    try {
      const CuspPotential pot(a, v, PotentialKind::barrier);
      scan.samples[i].t = reflection_transmission(e, pot).t;
    } catch (const Error& err) {
      scan.samples[i].status = errc_name(err.code());
    }
  });

  const auto t_at = [&](double v) {
    return reflection_transmission(e, CuspPotential(a, v, PotentialKind::barrier)).t;
  };
  constexpr double inv_gold = 0.6180339887498949;
  for (int i = 1; i + 1 < n; ++i) {
    const ScanSample& s = scan.samples[i];
    if (s.status != "ok" || scan.samples[i - 1].status != "ok" ||
        scan.samples[i + 1].status != "ok")
      continue;
    if (!(s.t >= scan.samples[i - 1].t && s.t >= scan.samples[i + 1].t)) continue;
    if (!(s.t > 0.3)) continue;  // ignore shallow wiggles
    double lo = scan.samples[i - 1].v0, hi = scan.samples[i + 1].v0;
    try {
      double c = hi - inv_gold * (hi - lo), d = lo + inv_gold * (hi - lo);
      double fc = t_at(c), fd = t_at(d);
      while (hi - lo > 1e-4) {
        if (fc > fd) {
          hi = d; d = c; fd = fc;
          c = hi - inv_gold * (hi - lo);
          fc = t_at(c);
        } else {
          lo = c; c = d; fc = fd;
          d = lo + inv_gold * (hi - lo);
          fd = t_at(d);
        }
      }
      const double v_peak = 0.5 * (lo + hi);
      const double t_peak = t_at(v_peak);
      if (t_peak >= 1.0 - 1e-3 &&
          (scan.peaks.empty() || v_peak - scan.peaks.back() > 1e-3)) {
        scan.peaks.push_back(v_peak);
        scan.peak_t.push_back(t_peak);
      }
    } catch (const Error&) {
      // refinement wandered out of the usable range; drop this candidate
    }
  }
  for (size_t i = 1; i < scan.peaks.size(); ++i)
    scan.spacings.push_back(scan.peaks[i] - scan.peaks[i - 1]);
  return scan;
}

}  // namespace dkp
