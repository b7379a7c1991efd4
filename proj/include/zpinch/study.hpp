#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "zpinch/io.hpp"

namespace zpinch {

/// Full study description as read from the JSON config file.
struct StudyConfig {
  PressureProfile profile;
  GridSpec grid;
  int m_min = 0, m_max = 0;
  int k_min = 1, k_max = 4;
  int refinements = 3;
  double ref_rel_tol = 1e-6;
  double eig_rel_tol = 1e-9;
  int n_vac = 0;

  bool scaling_enabled = false;
  std::vector<double> scaling_alphas{0.5, 0.75};
  int scaling_kpow_min = 4, scaling_kpow_max = 10;

  bool dynamics_enabled = false;
  double dyn_t_end = 0.0;  // 0 -> enough for ~5.5 e-folds of the mode
  double dyn_dt = 0.0;
  int dyn_max_modes = 3;
  std::string dyn_source = "minimizer";  // or "random"

  std::filesystem::path out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  std::uint64_t seed = 0;
  int threads = 1;
  bool strict_admissibility = false;

  nlohmann::ordered_json echo;  // the config as parsed, for summary.json
};

StudyConfig parse_config(const nlohmann::ordered_json& j);
StudyConfig load_config(const std::filesystem::path& path);

struct StudyOutcome {
  int exit_code = 0;  // 0 ok, 2 config, 3 non-convergence, 4 partial results
  std::filesystem::path artifact_dir;
  nlohmann::ordered_json summary;
};

/// Runs equilibrium -> criteria -> sweep -> scaling -> dynamics, writing
/// equilibrium.csv, criteria.csv, spectrum.csv, minimizers/*.csv,
/// scaling.csv, dynamics/*.csv and summary.json under the output directory.
/// Deterministic for a fixed config and seed. Stage failures are recorded in
/// the summary and already-written artifacts are kept.
StudyOutcome run_study(const StudyConfig& cfg);

/// Projects study artifacts onto gnuplot-ready x-y(-z) text files:
/// mu_map.dat (m, k, mu per unstable mode), loglog.dat (log k, log(-lambda))
/// and criterion_m*.dat scans.
void emit_plot_data(const std::filesystem::path& artifact_dir);

}  // namespace zpinch
