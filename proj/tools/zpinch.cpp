// Command-line front end: one subcommand per study stage plus `run` for the
// whole pipeline.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "zpinch/errors.hpp"
#include "zpinch/study.hpp"

namespace {

using namespace zpinch;

int resolve_threads(int flag_value) {
  if (const char* env = std::getenv("ZPINCH_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
    }
  }
  return std::max(1, flag_value);
}

struct CommonArgs {
  std::string config;
  std::string out;
  int threads = 1;
  std::uint64_t seed = 0;
  bool strict = false;
};

StudyConfig make_config(const CommonArgs& args) {
  StudyConfig cfg = load_config(args.config);
  if (!args.out.empty()) cfg.out_dir = args.out;
  cfg.threads = resolve_threads(args.threads > 0 ? args.threads : cfg.threads);
  if (args.seed) cfg.seed = args.seed;
  if (args.strict) cfg.strict_admissibility = true;
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config, "JSON study configuration");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out, "output directory (overrides config)");
  cmd->add_option("--threads", args.threads, "worker threads for sweeps");
  cmd->add_option("--seed", args.seed, "seed for randomized stages");
  cmd->add_flag("--strict-admissibility", args.strict, "reject inadmissible profiles");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"z-pinch equilibrium and linear stability toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  int solve_m = 0, solve_k = 1;
  std::string report_dir;

  auto* c_equilibrium = app.add_subcommand("equilibrium", "build the equilibrium and export it");
  add_common(c_equilibrium, args);
  auto* c_criteria = app.add_subcommand("criteria", "pointwise instability criterion scans");
  add_common(c_criteria, args);
  auto* c_solve = app.add_subcommand("solve", "single-mode growth rate");
  add_common(c_solve, args);
  c_solve->add_option("--m", solve_m, "azimuthal mode number");
  c_solve->add_option("--k", solve_k, "axial wavenumber");
  auto* c_sweep = app.add_subcommand("sweep", "growth-rate table over the mode ranges");
  add_common(c_sweep, args);
  auto* c_scaling = app.add_subcommand("scaling", "large-k test-family study");
  add_common(c_scaling, args);
  auto* c_evolve = app.add_subcommand("evolve", "time-integrate unstable modes");
  add_common(c_evolve, args);
  auto* c_run = app.add_subcommand("run", "full study pipeline");
  add_common(c_run, args);
  auto* c_report = app.add_subcommand("report", "emit plot data from study artifacts");
  c_report->add_option("--dir", report_dir, "artifact directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_report->parsed()) {
      emit_plot_data(report_dir);
      return 0;
    }

    StudyConfig cfg = make_config(args);
    // stage subcommands run the pipeline with the other stages switched off
    if (c_equilibrium->parsed() || c_criteria->parsed() || c_sweep->parsed() ||
        c_solve->parsed()) {
      cfg.scaling_enabled = false;
      cfg.dynamics_enabled = false;
    }
    if (c_equilibrium->parsed() || c_criteria->parsed()) {
      cfg.m_min = std::min(cfg.m_min, 0);
      cfg.m_max = std::max(cfg.m_max, 0);
    }
    if (c_solve->parsed()) {
      cfg.m_min = cfg.m_max = solve_m;
      cfg.k_min = cfg.k_max = solve_k;
    }
    if (c_scaling->parsed()) {
      cfg.scaling_enabled = true;
      cfg.dynamics_enabled = false;
    }
    if (c_evolve->parsed()) {
      cfg.dynamics_enabled = true;
      cfg.scaling_enabled = false;
    }

    if (c_equilibrium->parsed()) {
      Equilibrium eq = build_equilibrium(cfg.profile, cfg.grid, cfg.strict_admissibility);
      std::filesystem::create_directories(cfg.out_dir);
      write_equilibrium_csv(cfg.out_dir / "equilibrium.csv", eq);
      const auto adm = check_admissibility(cfg.profile, eq);
      std::cout << "equilibrium written to " << (cfg.out_dir / "equilibrium.csv").string()
                << "\nadmissible: " << (adm.admissible ? "yes" : "no")
                << "  measured boundary order: " << adm.measured_beta
                << "\n|p'|/rho bounded: " << (adm.dp_over_rho_bounded ? "yes" : "no") << "\n";
      return 0;
    }

    StudyOutcome out = run_study(cfg);
    if (c_solve->parsed()) {
      const auto rows = load_spectrum_csv(cfg.out_dir / "spectrum.csv");
      for (const auto& r : rows) {
        std::cout << "m=" << r.m << " k=" << r.k << "  lambda=" << format_double(r.lambda);
        if (r.mu) std::cout << "  mu=" << format_double(*r.mu);
        std::cout << "  el_residual=" << format_double(r.el_residual)
                  << "  bc_residual=" << format_double(r.bc_residual) << "  n=" << r.n_grid
                  << "\n";
      }
    } else {
      std::cout << out.summary["stages"].dump(2) << "\n";
      if (out.summary.contains("verdicts"))
        std::cout << out.summary["verdicts"].dump(2) << "\n";
    }
    return out.exit_code;
  } catch (const zpinch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const zpinch::NonConvergedGrid& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const zpinch::SolverStall& e) {
    std::cerr << "solver stall: " << e.what() << "\n";
    return 3;
  } catch (const zpinch::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
