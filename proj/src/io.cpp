#include "zpinch/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zpinch/errors.hpp"

namespace zpinch {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

double CsvTable::num(size_t row, int col) const {
  const std::string& s = rows.at(row).at(col);
  if (s.empty()) return std::nan("");
  return std::stod(s);
}

CsvTable load_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("cannot open " + path.string());
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_equilibrium_csv(const fs::path& path, const Equilibrium& eq) {
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < eq.grid.n(); ++i)
    rows.push_back({format_double(eq.grid.r[i]), format_double(eq.p[i]), format_double(eq.dp[i]),
                    format_double(eq.rho[i]), format_double(eq.Btheta[i]),
                    format_double(eq.Jz[i])});
  write_csv(path, {"r", "p", "dp", "rho", "Btheta", "Jz"}, rows);
}

void write_criteria_csv(const fs::path& path, const std::vector<CriterionReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& rep : reports)
    for (Eigen::Index i = 0; i < rep.r.size(); ++i)
      rows.push_back({std::to_string(rep.m), format_double(rep.r[i]),
                      format_double(rep.value[i])});
  write_csv(path, {"m", "r", "value"}, rows);
}

void write_spectrum_csv(const fs::path& path, const SweepResult& sweep) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : sweep.entries) {
    if (!e.ok) continue;
    const auto& r = e.result;
    rows.push_back({std::to_string(r.mode.m), std::to_string(r.mode.k), format_double(r.lambda),
                    r.mu ? format_double(*r.mu) : std::string(),
                    format_double(r.el_residual), format_double(r.bc_residual),
                    std::to_string(r.n_grid)});
  }
  write_csv(path, {"m", "k", "lambda", "mu", "el_residual", "bc_residual", "n_grid"}, rows);
}

void write_minimizer_csv(const fs::path& dir, const SpectralResult& res) {
  const std::string stem =
      "mode_m" + std::to_string(res.mode.m) + "_k" + std::to_string(res.mode.k);
  const TrialField& f = res.minimizer;
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < f.n(); ++i)
    rows.push_back({format_double(f.r[i]), format_double(f.xi[i]), format_double(f.eta[i]),
                    f.zeta.size() ? format_double(f.zeta[i]) : std::string("0")});
  // eta/zeta are element values on (r_{i-1}, r_i]
  write_csv(dir / (stem + ".csv"), {"r", "xi", "eta", "zeta"}, rows);
  if (f.qr.size()) {
    std::vector<std::vector<std::string>> vrows;
    for (Eigen::Index i = 0; i < f.vac_r.size(); ++i)
      vrows.push_back({format_double(f.vac_r[i]), format_double(f.qr[i])});
    write_csv(dir / (stem + "_vacuum.csv"), {"r", "Qr"}, vrows);
  }
}

void write_scaling_csv(const fs::path& path, const std::vector<ScalingStudy>& studies) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& st : studies)
    for (const auto& pt : st.points)
      rows.push_back({format_double(st.alpha), std::to_string(pt.k), format_double(pt.J),
                      format_double(pt.E), format_double(pt.lambda_upper)});
  write_csv(path, {"alpha", "k", "J_value", "E_value", "lambda_upper"}, rows);
}

void write_trajectory_csv(const fs::path& path, const ModeTrajectory& traj) {
  std::vector<std::vector<std::string>> rows;
  for (Eigen::Index i = 0; i < traj.t.size(); ++i)
    rows.push_back({format_double(traj.t[i]), format_double(traj.kinetic[i]),
                    format_double(traj.potential[i]), format_double(traj.total[i]),
                    format_double(traj.log_norm[i])});
  write_csv(path, {"t", "kinetic", "potential", "total", "log_norm"}, rows);
}

std::vector<SpectrumRow> load_spectrum_csv(const fs::path& path) {
  CsvTable t = load_csv(path);
  const int cm = t.column("m"), ck = t.column("k"), cl = t.column("lambda"), cmu = t.column("mu");
  const int cel = t.column("el_residual"), cbc = t.column("bc_residual"), cn = t.column("n_grid");
  if (cm < 0 || ck < 0 || cl < 0) throw MissingArtifact("spectrum.csv lacks m/k/lambda columns");
  std::vector<SpectrumRow> rows;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    SpectrumRow r;
    r.m = static_cast<int>(t.num(i, cm));
    r.k = static_cast<int>(t.num(i, ck));
    r.lambda = t.num(i, cl);
    if (cmu >= 0 && !t.rows[i][cmu].empty()) r.mu = t.num(i, cmu);
    if (cel >= 0) r.el_residual = t.num(i, cel);
    if (cbc >= 0) r.bc_residual = t.num(i, cbc);
    if (cn >= 0) r.n_grid = static_cast<int>(t.num(i, cn));
    rows.push_back(r);
  }
  return rows;
}

TrialField load_minimizer_csv(const fs::path& plasma, const fs::path& vacuum) {
  CsvTable t = load_csv(plasma);
  TrialField f;
  const int n = static_cast<int>(t.rows.size());
  f.r.resize(n);
  f.xi.resize(n);
  f.eta.resize(n);
  f.zeta.resize(n);
  const int cr = t.column("r"), cx = t.column("xi"), ce = t.column("eta"), cz = t.column("zeta");
  for (int i = 0; i < n; ++i) {
    f.r[i] = t.num(i, cr);
    f.xi[i] = t.num(i, cx);
    f.eta[i] = t.num(i, ce);
    f.zeta[i] = t.num(i, cz);
  }
  if (!vacuum.empty() && fs::exists(vacuum)) {
    CsvTable v = load_csv(vacuum);
    const int vr = v.column("r"), vq = v.column("Qr");
    f.vac_r.resize(v.rows.size());
    f.qr.resize(v.rows.size());
    for (size_t i = 0; i < v.rows.size(); ++i) {
      f.vac_r[i] = v.num(i, vr);
      f.qr[i] = v.num(i, vq);
    }
  } else {
    f.zeta.resize(0);
  }
  return f;
}

std::vector<ScalingPoint> load_scaling_csv(const fs::path& path, double alpha) {
  CsvTable t = load_csv(path);
  const int ca = t.column("alpha"), ck = t.column("k"), cj = t.column("J_value");
  const int ce = t.column("E_value"), cl = t.column("lambda_upper");
  std::vector<ScalingPoint> pts;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    if (std::abs(t.num(i, ca) - alpha) > 1e-12) continue;
    ScalingPoint p;
    p.k = static_cast<int>(t.num(i, ck));
    p.J = t.num(i, cj);
    p.E = t.num(i, ce);
    p.lambda_upper = t.num(i, cl);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace zpinch
