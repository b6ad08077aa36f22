// Command-line front end: moduli, sweep, convergence and bounds runs driven
// by a config file, with CSV output suitable for plotting.

#include <omp.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "phonomog/csv.hpp"
#include "phonomog/kernels.hpp"
#include "phonomog/log.hpp"

namespace {

using namespace phonomog;

struct CliArgs {
  std::string config_path;
  std::string out_path;
  std::string method_override;
  std::vector<int> n_override;
  int jobs = 0;
  bool strict = false;
};

RunConfig load_config(const CliArgs& args) {
  RunConfig cfg = parse_config_file(args.config_path);
  if (!args.method_override.empty()) {
    if (args.method_override == "pwe")
      cfg.methods = {Method::pwe};
    else if (args.method_override == "mm")
      cfg.methods = {Method::mm};
    else if (args.method_override == "both")
      cfg.methods = {Method::mm, Method::pwe};
    else
      throw ConfigError("--method must be pwe, mm or both");
  }
  if (!args.n_override.empty()) {
    for (int n : args.n_override)
      if (n < 0) throw ConfigError("--n-list entries must be >= 0");
    cfg.n_list = args.n_override;
  }
  if (!args.out_path.empty()) cfg.output_path = args.out_path;
  if (args.jobs > 0) cfg.jobs = args.jobs;
  if (args.strict) cfg.solve.strict = true;
  return cfg;
}

/// Writes through a temporary stream so a failed run never leaves a partial file.
int with_output(const RunConfig& cfg, const std::function<void(std::ostream&)>& fn) {
  std::ostringstream buf;
  fn(buf);
  if (cfg.output_path.empty()) {
    std::cout << buf.str();
    return 0;
  }
  std::ofstream out(cfg.output_path);
  if (!out) throw ConfigError("cannot open output file: " + cfg.output_path);
  out << buf.str();
  log_info("wrote " + cfg.output_path);
  return 0;
}

int run_moduli(const RunConfig& cfg) {
  std::vector<EffectiveResult> results;
  for (Method m : cfg.methods)
    for (int n : cfg.n_list) results.push_back(effective_moduli(cfg.cell, m, n, cfg.solve));
  return with_output(cfg, [&](std::ostream& os) { write_moduli_csv(os, cfg, results); });
}

SweepRow sweep_point(const RunConfig& cfg, double value) {
  SweepRow row;
  row.value = value;
  const UnitCell cell = sweep_cell(cfg, value);
  const CellField field = to_cubic_equivalent(cell, cfg.solve.formulation);
  const double rho = cell.mean_density();
  int redraws = 0;
  for (Method m : cfg.methods) {
    for (int n : cfg.n_list) {
      Mat3 c11_block, c22_block;
      if (m == Method::pwe) {
        const PweSystem sys = PweSystem::assemble(field, n, cfg.solve.pwe);
        const auto ce = sys.solve();
        c11_block = ce[0][0];
        c22_block = ce[1][1];
      } else {
        MmDiagnostics d1, d2;
        c11_block = mm_cll_eff(field, 1, n, cfg.solve.mm, &d1);
        c22_block = mm_cll_eff(field, 2, n, cfg.solve.mm, &d2);
        redraws += d1.alpha_redraws + d2.alpha_redraws;
      }
      row.speeds_e1.push_back(gamma_speeds(c11_block, rho));
      row.c11_gpa.push_back(c11_block(0, 0).real() * 1e-9);
      row.c66_gpa.push_back(c22_block(0, 0).real() * 1e-9);
    }
  }
  row.bound_mm0 = gamma_speeds(mm_zero_cll(field, 1), rho);
  row.bound_voigt = gamma_speeds(voigt_gamma(field, Vec3d(1, 0, 0)), rho);
  try {
    const HsBounds hs = hashin_shtrikman(cell);
    row.hs_cl_low = hs.cl_low;
    row.hs_ct_low = hs.ct_low;
    row.hs_valid = true;
  } catch (const ConfigError&) {
    row.hs_valid = false;
  }
  if (redraws > 0) row.diagnostics = "alpha_redraws=" + std::to_string(redraws);
  return row;
}

int run_sweep(const RunConfig& cfg) {
  if (cfg.sweep_parameter.empty()) throw ConfigError("sweep requires a [sweep] section");
  if (cfg.sweep_grid.empty()) throw ConfigError("sweep.grid is empty");

  std::vector<SweepRow> rows(cfg.sweep_grid.size());
  const int jobs = cfg.jobs > 0 ? cfg.jobs : kernels::max_threads();
  std::string first_error;
  bool failed_config = false;
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
  for (int i = 0; i < static_cast<int>(cfg.sweep_grid.size()); ++i) {
    try {
      rows[i] = sweep_point(cfg, cfg.sweep_grid[i]);
    } catch (const std::exception& e) {
#pragma omp critical
      if (first_error.empty()) {
        first_error = e.what();
        failed_config = (dynamic_cast<const ConfigError*>(&e) != nullptr);
      }
    }
  }
  if (!first_error.empty()) {
    if (failed_config) throw ConfigError(first_error);
    throw NumericalError(first_error);
  }
  return with_output(cfg, [&](std::ostream& os) { write_sweep_csv(os, cfg, rows); });
}

int run_convergence(const RunConfig& cfg) {
  const auto rows = convergence_study(cfg.cell, cfg.methods, cfg.n_list, cfg.solve);
  return with_output(cfg, [&](std::ostream& os) { write_convergence_csv(os, rows); });
}

int run_bounds(const RunConfig& cfg) {
  return with_output(cfg, [&](std::ostream& os) { write_bounds_csv(os, cfg); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasistatic effective moduli of 3D periodic elastic composites (PWE and MM methods)"};
  app.require_subcommand(1);

  CliArgs args;
  std::string mode;
  for (const auto& name : {"moduli", "sweep", "convergence", "bounds"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config_path, "config file path")->required();
    sub->add_option("--out", args.out_path, "output CSV path (default: config [output].path or stdout)");
    sub->add_option("--method", args.method_override, "pwe | mm | both");
    sub->add_option("--n-list", args.n_override, "truncation list override");
    sub->add_option("--jobs", args.jobs, "worker pool size for sweeps");
    sub->add_flag("--strict", args.strict, "promote warnings to errors");
    sub->callback([&mode, name] { mode = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = load_config(args);
    if (mode == "moduli") return run_moduli(cfg);
    if (mode == "sweep") return run_sweep(cfg);
    if (mode == "convergence") return run_convergence(cfg);
    return run_bounds(cfg);
  } catch (const phonomog::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const phonomog::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
