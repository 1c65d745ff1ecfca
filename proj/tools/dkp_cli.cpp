// Command-line front end: argument parsing and output-file plumbing only;
// the actual work lives in dkp/cli.hpp.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dkp/cli.hpp"

namespace {

struct CommonFlags {
  std::string format = "csv";
  std::string output;
};

void add_common(CLI::App* cmd, dkp::cli::RunConfig& cfg, CommonFlags& common) {
  cmd->add_option("--a", cfg.a, "shape length a > 0");
  cmd->add_option("--format", common.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", common.output, "write the table to this file instead of stdout");
}

int dispatch(const dkp::cli::RunConfig& cfg, const CommonFlags& common) {
  if (!common.output.empty()) {
    std::ofstream file(common.output);
    if (!file) {
      std::cerr << "error: cannot open output file " << common.output << '\n';
      return dkp::cli::kExitConfig;
    }
    return dkp::cli::run(cfg, file, std::cerr);
  }
  return dkp::cli::run(cfg, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scattering and bound states of the cusp potential V(x) = +/-V0 exp(-|x|/a)"};
  app.require_subcommand(1);

  dkp::cli::RunConfig cfg;
  CommonFlags common;
  double fixed_e = 0.0, e_min = 0.0, e_max = 0.0, v_min = 0.0, v_max = 0.0;

  CLI::App* scatter = app.add_subcommand(
      "scatter", "reflection and transmission at one energy or over an energy grid");
  scatter->add_option("--v0", cfg.v0, "barrier strength V0 > 0")->required();
  CLI::Option* opt_e = scatter->add_option("--e", fixed_e, "single energy (|e| > 1)");
  CLI::Option* opt_emin = scatter->add_option("--e-min", e_min, "grid start");
  CLI::Option* opt_emax = scatter->add_option("--e-max", e_max, "grid end");
  scatter->add_option("--n", cfg.n, "grid size (>= 2)");
  add_common(scatter, cfg, common);

  CLI::App* scan = app.add_subcommand(
      "resonance-scan", "transmission versus barrier strength at fixed energy, with peaks");
  scan->add_option("--e", fixed_e, "probe energy (|e| > 1)")->required();
  scan->add_option("--v-min", v_min, "strength grid start")->required();
  scan->add_option("--v-max", v_max, "strength grid end")->required();
  scan->add_option("--n", cfg.n, "grid size (>= 2)")->required();
  add_common(scan, cfg, common);

  CLI::App* spectrum = app.add_subcommand(
      "bound-spectrum", "bound-state energies of the well over a depth grid, with turning point");
  spectrum->add_option("--v-min", v_min, "depth grid start")->required();
  spectrum->add_option("--v-max", v_max, "depth grid end")->required();
  spectrum->add_option("--n", cfg.n, "grid size (>= 2)")->required();
  add_common(spectrum, cfg, common);

  CLI::App* validate = app.add_subcommand(
      "validate", "compare the analytic results against the ODE oracle on a grid");
  validate->add_option("--v0", cfg.v0, "barrier strength (energy-grid mode)");
  CLI::Option* vopt_e = validate->add_option("--e", fixed_e, "single energy to check");
  CLI::Option* vopt_emin = validate->add_option("--e-min", e_min, "energy grid start");
  CLI::Option* vopt_emax = validate->add_option("--e-max", e_max, "energy grid end");
  validate->add_option("--v-min", v_min, "depth grid start (bound-state mode)");
  validate->add_option("--v-max", v_max, "depth grid end (bound-state mode)");
  validate->add_option("--n", cfg.n, "grid size");
  validate->add_option("--tol", cfg.tol, "oracle tolerance in [1e-12, 1e-6]");
  validate->add_option("--max-diff", cfg.max_diff,
                       "largest tolerated |analytic - oracle| (exit 4 beyond)");
  add_common(validate, cfg, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dkp::cli::kExitConfig;
  }

  if (scatter->parsed()) {
    cfg.command = dkp::cli::Command::scatter;
    cfg.kind = dkp::PotentialKind::barrier;
    if (opt_e->count()) cfg.fixed_e = fixed_e;
    if (opt_emin->count()) cfg.e_min = e_min;
    if (opt_emax->count()) cfg.e_max = e_max;
  } else if (scan->parsed()) {
    cfg.command = dkp::cli::Command::resonance_scan;
    cfg.kind = dkp::PotentialKind::barrier;
    cfg.fixed_e = fixed_e;
    cfg.v_min = v_min;
    cfg.v_max = v_max;
  } else if (spectrum->parsed()) {
    cfg.command = dkp::cli::Command::bound_spectrum;
    cfg.kind = dkp::PotentialKind::well;
    cfg.v_min = v_min;
    cfg.v_max = v_max;
  } else if (validate->parsed()) {
    cfg.command = dkp::cli::Command::validate;
    cfg.kind = dkp::PotentialKind::barrier;
    if (vopt_e->count()) cfg.fixed_e = fixed_e;
    if (vopt_emin->count()) cfg.e_min = e_min;
    if (vopt_emax->count()) cfg.e_max = e_max;
    if (validate->count("--v-min")) cfg.v_min = v_min;
    if (validate->count("--v-max")) cfg.v_max = v_max;
  }
  cfg.format = common.format == "json" ? dkp::cli::Format::json : dkp::cli::Format::csv;

  return dispatch(cfg, common);
}
