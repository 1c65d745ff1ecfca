#pragma once

// Command implementations behind the CLI binary. Each run_* writes its table
// (CSV or JSON) to the given stream and returns a process exit code:
//   0 success, 2 configuration error, 3 domain/convergence failure,
//   4 internal inconsistency or a validation gate tripping.
// run() adds the exception -> exit-code mapping. Output is deterministic:
// fixed 15-significant-digit formatting, '\n' endings, sorted JSON keys.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dkp/bound_states.hpp"
#include "dkp/errors.hpp"
#include "dkp/model.hpp"
#include "dkp/oracle.hpp"
#include "dkp/scattering.hpp"

namespace dkp::cli {

enum class Command { scatter, resonance_scan, bound_spectrum, validate };
enum class Format { csv, json };

struct RunConfig {
  Command command = Command::scatter;
  double a = 1.0;
  double v0 = 1.0;
  PotentialKind kind = PotentialKind::barrier;
  std::optional<double> fixed_e;
  std::optional<double> e_min, e_max;  // energy grid (scatter, validate)
  std::optional<double> v_min, v_max;  // strength grid (resonance-scan, bound-spectrum, validate)
  int n = 0;
  Format format = Format::csv;
  double tol = kDefaultOracleTol;  // oracle tolerance (validate)
  double max_diff = 1e-5;          // validate gate on |analytic - oracle|
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitInternal = 4;

namespace detail {

inline std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) raise(errc::invalid_argument, what);
}

inline void emit_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

}  // namespace detail

inline int run_scatter(const RunConfig& cfg, std::ostream& out) {
  using detail::fmt_g;
  detail::require(cfg.fixed_e.has_value() != (cfg.e_min && cfg.e_max),
                  "scatter: give either --e or an --e-min/--e-max/--n grid");
  const CuspPotential pot(cfg.a, cfg.v0, cfg.kind);

  std::vector<SweepPoint> points;
  if (cfg.fixed_e) {
    // single point: failures carry their category to the exit code
    const ScatteringResult rt = reflection_transmission({*cfg.fixed_e}, pot);
    SweepPoint p;
    p.param = *cfg.fixed_e;
    p.r = rt.r;
    p.t = rt.t;
    p.unitarity_defect = std::abs(rt.r + rt.t - 1.0);
    points.push_back(p);
  } else {
    points = sweep_energy(pot, *cfg.e_min, *cfg.e_max, cfg.n);
  }

  double max_defect = 0.0;
  for (const SweepPoint& p : points)
    if (p.status == "ok") max_defect = std::max(max_defect, p.unitarity_defect);

  if (cfg.format == Format::csv) {
    out << "e,r,t,unitarity_defect,status\n";
    for (const SweepPoint& p : points) {
      if (p.status == "ok")
        out << fmt_g(p.param) << ',' << fmt_g(p.r) << ',' << fmt_g(p.t) << ','
            << fmt_g(p.unitarity_defect) << ",ok\n";
      else
        out << fmt_g(p.param) << ",,,," << p.status << '\n';
    }
    out << "# max_unitarity_defect=" << fmt_g(max_defect) << '\n';
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepPoint& p : points) {
      nlohmann::json row{{"e", p.param}, {"status", p.status}};
      if (p.status == "ok") {
        row["r"] = p.r;
        row["t"] = p.t;
        row["unitarity_defect"] = p.unitarity_defect;
      }
      rows.push_back(row);
    }
    detail::emit_json(out, {{"command", "scatter"},
                            {"a", cfg.a},
                            {"v0", cfg.v0},
                            {"kind", cfg.kind == PotentialKind::barrier ? "barrier" : "well"},
                            {"rows", rows},
                            {"max_unitarity_defect", max_defect}});
  }
  return kExitOk;
}

inline int run_resonance_scan(const RunConfig& cfg, std::ostream& out) {
  using detail::fmt_g;
  detail::require(cfg.fixed_e.has_value(), "resonance-scan: --e is required");
  detail::require(cfg.v_min && cfg.v_max, "resonance-scan: --v-min and --v-max are required");
  const ResonanceScan scan =
      scan_resonances_vs_strength(cfg.a, {*cfg.fixed_e}, *cfg.v_min, *cfg.v_max, cfg.n);

  if (cfg.format == Format::csv) {
    out << "v0,t,status\n";
    for (const ScanSample& s : scan.samples) {
      if (s.status == "ok")
        out << fmt_g(s.v0) << ',' << fmt_g(s.t) << ",ok\n";
      else
        out << fmt_g(s.v0) << ",," << s.status << '\n';
    }
    for (size_t i = 0; i < scan.peaks.size(); ++i)
      out << "# peak v0=" << fmt_g(scan.peaks[i]) << " t=" << fmt_g(scan.peak_t[i]) << '\n';
    for (double sp : scan.spacings) out << "# spacing " << fmt_g(sp) << '\n';
    if (scan.peaks.empty()) out << "# no_peaks\n";
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const ScanSample& s : scan.samples) {
      nlohmann::json row{{"v0", s.v0}, {"status", s.status}};
      if (s.status == "ok") row["t"] = s.t;
      rows.push_back(row);
    }
    detail::emit_json(out, {{"command", "resonance-scan"},
                            {"a", cfg.a},
                            {"e", *cfg.fixed_e},
                            {"rows", rows},
                            {"peaks", scan.peaks},
                            {"spacings", scan.spacings}});
  }
  return kExitOk;
}

inline int run_bound_spectrum(const RunConfig& cfg, std::ostream& out) {
  using detail::fmt_g;
  detail::require(cfg.v_min && cfg.v_max, "bound-spectrum: --v-min and --v-max are required");
  if (cfg.kind != PotentialKind::well)
    raise(errc::wrong_kind, "bound-spectrum: requires a well");
  const SpectrumTrace trace = trace_spectrum(cfg.a, *cfg.v_min, *cfg.v_max, cfg.n);

  if (cfg.format == Format::csv) {
    out << "v0,e,residual\n";
    for (const BoundState& b : trace.points)
      out << fmt_g(b.v0) << ',' << fmt_g(b.e) << ',' << fmt_g(b.residual) << '\n';
    if (trace.turning_point)
      out << "# turning_point v0=" << fmt_g(trace.turning_point->v0)
          << " e=" << fmt_g(trace.turning_point->e) << '\n';
    if (trace.low_confidence) out << "# low_confidence\n";
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const BoundState& b : trace.points)
      rows.push_back({{"v0", b.v0}, {"e", b.e}, {"residual", b.residual}});
    nlohmann::json j{{"command", "bound-spectrum"},
                     {"a", cfg.a},
                     {"rows", rows},
                     {"low_confidence", trace.low_confidence}};
    if (trace.turning_point)
      j["turning_point"] = {{"v0", trace.turning_point->v0}, {"e", trace.turning_point->e}};
    else
      j["turning_point"] = nullptr;
    detail::emit_json(out, j);
  }
  return kExitOk;
}

inline int run_validate(const RunConfig& cfg, std::ostream& out) {
  using detail::fmt_g;
  const bool e_mode = cfg.fixed_e.has_value() || (cfg.e_min && cfg.e_max);
  const bool v_mode = cfg.v_min && cfg.v_max;
  detail::require(e_mode != v_mode,
                  "validate: give an energy grid (scattering check) or a strength grid "
                  "(bound-state check), not both");

  struct Row {
    double param;
    std::string quantity;
    double analytic;
    double oracle;
    double diff;
  };
  std::vector<Row> rows;

  if (e_mode) {
    const CuspPotential pot(cfg.a, cfg.v0, cfg.kind);
    std::vector<double> es;
    if (cfg.fixed_e) {
      es.push_back(*cfg.fixed_e);
    } else {
      detail::require(cfg.n >= 2, "validate: --n must be at least 2");
      for (int i = 0; i < cfg.n; ++i)
        es.push_back(*cfg.e_min + (*cfg.e_max - *cfg.e_min) * i / (cfg.n - 1));
    }
    for (double e : es) {
      const ScatteringResult an = reflection_transmission({e}, pot);
      const OracleRt orc = oracle_rt(make_ode_problem(pot, e, kDefaultBoxFactor, cfg.tol));
      rows.push_back({e, "r", an.r, orc.r, std::abs(an.r - orc.r)});
      rows.push_back({e, "t", an.t, orc.t, std::abs(an.t - orc.t)});
    }
  } else {
    detail::require(cfg.n >= 1, "validate: --n must be at least 1");
    for (int i = 0; i < cfg.n; ++i) {
      const double v = cfg.n == 1 ? *cfg.v_min
                                  : *cfg.v_min + (*cfg.v_max - *cfg.v_min) * i / (cfg.n - 1);
      const CuspPotential pot(cfg.a, v, PotentialKind::well);
      const std::vector<BoundState> an = find_bound_states(pot);
      const std::vector<double> orc = oracle_bound_energies(pot, Parity::even,
                                                            kDefaultBoxFactor, cfg.tol);
      for (const BoundState& b : an) {
        double best = std::numeric_limits<double>::infinity();
        double best_e = std::numeric_limits<double>::quiet_NaN();
        for (double oe : orc)
          if (std::abs(oe - b.e) < best) {
            best = std::abs(oe - b.e);
            best_e = oe;
          }
        rows.push_back({v, "e", b.e, best_e, best});
      }
    }
  }

  double max_diff = 0.0;
  for (const Row& r : rows) max_diff = std::max(max_diff, r.diff);

  if (cfg.format == Format::csv) {
    out << "param,quantity,analytic,oracle,abs_diff\n";
    for (const Row& r : rows)
      out << fmt_g(r.param) << ',' << r.quantity << ',' << fmt_g(r.analytic) << ','
          << fmt_g(r.oracle) << ',' << fmt_g(r.diff) << '\n';
    out << "# max_abs_diff=" << fmt_g(max_diff) << '\n';
  } else {
    nlohmann::json jrows = nlohmann::json::array();
    for (const Row& r : rows)
      jrows.push_back({{"param", r.param},
                       {"quantity", r.quantity},
                       {"analytic", r.analytic},
                       {"oracle", r.oracle},
                       {"abs_diff", r.diff}});
    detail::emit_json(out, {{"command", "validate"},
                            {"a", cfg.a},
                            {"rows", jrows},
                            {"max_abs_diff", max_diff},
                            {"max_diff_allowed", cfg.max_diff}});
  }
  return max_diff <= cfg.max_diff ? kExitOk : kExitInternal;
}

// Dispatch with the exception -> exit-code policy.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::scatter: return run_scatter(cfg, out);
      case Command::resonance_scan: return run_resonance_scan(cfg, out);
      case Command::bound_spectrum: return run_bound_spectrum(cfg, out);
      case Command::validate: return run_validate(cfg, out);
    }
    return kExitInternal;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    switch (ex.code()) {
      case errc::invalid_argument:
      case errc::empty_grid:
      case errc::wrong_kind:
        return kExitConfig;
      case errc::unitarity_violation:
      case errc::accuracy_loss:
        return kExitInternal;
      default:
        return kExitDomain;
    }
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace dkp::cli
