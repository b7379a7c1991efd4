#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zpinch/dynamics.hpp"
#include "zpinch/scaling.hpp"
#include "zpinch/spectrum.hpp"

namespace zpinch {

// shortest-roundtrip decimal formatting, deterministic across runs
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when missing
  double num(size_t row, int col) const;
};

CsvTable load_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_equilibrium_csv(const std::filesystem::path& path, const Equilibrium& eq);
void write_criteria_csv(const std::filesystem::path& path,
                        const std::vector<CriterionReport>& reports);
void write_spectrum_csv(const std::filesystem::path& path, const SweepResult& sweep);
void write_minimizer_csv(const std::filesystem::path& dir, const SpectralResult& res);
void write_scaling_csv(const std::filesystem::path& path,
                       const std::vector<ScalingStudy>& studies);
void write_trajectory_csv(const std::filesystem::path& path, const ModeTrajectory& traj);

// loaders for the round-trip tests and the report stage
struct SpectrumRow {
  int m = 0, k = 0;
  double lambda = 0.0;
  std::optional<double> mu;
  double el_residual = 0.0, bc_residual = 0.0;
  int n_grid = 0;
};
std::vector<SpectrumRow> load_spectrum_csv(const std::filesystem::path& path);
TrialField load_minimizer_csv(const std::filesystem::path& plasma,
                              const std::filesystem::path& vacuum);
std::vector<ScalingPoint> load_scaling_csv(const std::filesystem::path& path, double alpha);

}  // namespace zpinch
