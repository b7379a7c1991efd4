#include "zpinch/study.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "zpinch/errors.hpp"

namespace zpinch {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

double jnum(const ordered_json& j, const std::string& key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) throw ConfigError(key + " must be a number");
  return j[key].get<double>();
}

int jint(const ordered_json& j, const std::string& key, int dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer()) throw ConfigError(key + " must be an integer");
  return j[key].get<int>();
}

}  // namespace

StudyConfig parse_config(const ordered_json& j) {
  StudyConfig cfg;
  cfg.echo = j;

  if (!j.contains("profile")) throw ConfigError("config needs a profile block");
  const auto& p = j["profile"];
  const std::string kind = p.value("kind", std::string("uniform-current"));
  const double gamma = jnum(p, "gamma", 5.0 / 3.0);
  const double r0 = jnum(p, "r0", 1.0);
  const double rw = jnum(p, "rw", 2.0);
  const double C = jnum(p, "C", 1.0);
  const double beta = jnum(p, "beta", 2.0);
  if (gamma <= 1.0) throw ConfigError("gamma must exceed 1");
  if (!(r0 > 0.0 && rw > r0)) throw ConfigError("need 0 < r0 < rw");
  switch (profile_kind_from_string(kind)) {
    case ProfileKind::PowerLaw:
      cfg.profile = PressureProfile::power_law(C, beta, gamma, r0, rw);
      break;
    case ProfileKind::Exponential:
      cfg.profile = PressureProfile::exponential(C, beta, gamma, r0, rw);
      break;
    case ProfileKind::UniformCurrent:
      cfg.profile = PressureProfile::uniform_current(2.0 * std::sqrt(C) / r0, gamma, r0, rw);
      break;
    case ProfileKind::Tabulated: {
      if (!p.contains("csv")) throw ConfigError("tabulated profile needs a csv path");
      CsvTable t = load_csv(p["csv"].get<std::string>());
      const int cr = t.column("r") >= 0 ? t.column("r") : 0;
      const int cp = t.column("p") >= 0 ? t.column("p") : 1;
      Eigen::ArrayXd r(t.rows.size()), pv(t.rows.size());
      for (size_t i = 0; i < t.rows.size(); ++i) {
        r[i] = t.num(i, cr);
        pv[i] = t.num(i, cp);
      }
      cfg.profile = PressureProfile::tabulated(r, pv, gamma, jnum(p, "A", 1.0), rw);
      break;
    }
  }
  cfg.profile.A = jnum(p, "A", 1.0);
  cfg.profile.relaxed = p.value("relaxed", false);

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    cfg.grid.n = jint(g, "n", 256);
    const std::string cl = g.value("clustering", std::string("clustered"));
    if (cl == "uniform")
      cfg.grid.clustering = Clustering::Uniform;
    else if (cl == "clustered" || cl == "two-sided")
      cfg.grid.clustering = Clustering::TwoSided;
    else
      throw ConfigError("unknown clustering policy: " + cl);
  }

  if (j.contains("modes")) {
    const auto& m = j["modes"];
    cfg.m_min = jint(m, "m_min", 0);
    cfg.m_max = jint(m, "m_max", 0);
    cfg.k_min = jint(m, "k_min", 1);
    cfg.k_max = jint(m, "k_max", 4);
    if (cfg.m_min > cfg.m_max || cfg.k_min > cfg.k_max)
      throw ConfigError("empty mode range");
  }

  if (j.contains("solver")) {
    const auto& s = j["solver"];
    cfg.refinements = jint(s, "refinements", 3);
    cfg.ref_rel_tol = jnum(s, "rel_tol", 1e-6);
    cfg.eig_rel_tol = jnum(s, "eig_tol", 1e-9);
    cfg.n_vac = jint(s, "n_vac", 0);
    if (cfg.ref_rel_tol <= 0.0 || cfg.eig_rel_tol <= 0.0)
      throw ConfigError("tolerances must be positive");
  }

  if (j.contains("scaling")) {
    const auto& s = j["scaling"];
    cfg.scaling_enabled = s.value("enabled", true);
    if (s.contains("alphas")) {
      cfg.scaling_alphas.clear();
      for (const auto& a : s["alphas"]) cfg.scaling_alphas.push_back(a.get<double>());
    }
    cfg.scaling_kpow_min = jint(s, "k_min_pow", 4);
    cfg.scaling_kpow_max = jint(s, "k_max_pow", 10);
    if (cfg.scaling_alphas.empty()) throw ConfigError("scaling.alphas must be nonempty");
  }

  if (j.contains("dynamics")) {
    const auto& d = j["dynamics"];
    cfg.dynamics_enabled = d.value("enabled", true);
    cfg.dyn_t_end = jnum(d, "t_end", 0.0);
    cfg.dyn_dt = jnum(d, "dt", 0.0);
    cfg.dyn_max_modes = jint(d, "max_modes", 3);
    cfg.dyn_source = d.value("source", std::string("minimizer"));
    if (cfg.dyn_source != "minimizer" && cfg.dyn_source != "random")
      throw ConfigError("dynamics.source must be minimizer or random");
  }

  if (j.contains("output")) {
    const auto& o = j["output"];
    cfg.out_dir = o.value("directory", std::string("out"));
    if (o.contains("formats")) {
      cfg.formats.clear();
      for (const auto& f : o["formats"]) cfg.formats.push_back(f.get<std::string>());
    }
  }

  cfg.seed = j.value("seed", std::uint64_t(0));
  cfg.threads = jint(j, "threads", 1);
  cfg.strict_admissibility = j.value("strict_admissibility", false);
  return cfg;
}

StudyConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

StudyOutcome run_study(const StudyConfig& cfg) {
  StudyOutcome out;
  out.artifact_dir = cfg.out_dir;
  fs::create_directories(cfg.out_dir);

  ordered_json summary;
  summary["config"] = cfg.echo;
  summary["seed"] = cfg.seed;
  ordered_json stages = ordered_json::object();
  ordered_json verdicts = ordered_json::object();
  bool partial = false, nonconverged = false;

  Equilibrium eq;
  try {
    eq = build_equilibrium(cfg.profile, cfg.grid, cfg.strict_admissibility);
    write_equilibrium_csv(cfg.out_dir / "equilibrium.csv", eq);
    const auto adm = check_admissibility(cfg.profile, eq);
    ordered_json a;
    a["admissible"] = adm.admissible;
    a["nonnegative"] = adm.nonnegative;
    a["vanishes_only_at_r0"] = adm.vanishes_only_at_r0;
    a["dp_nonpositive_near_r0"] = adm.dp_nonpositive_near_r0;
    a["ratio_limit_zero"] = adm.ratio_limit_zero;
    a["integral_nonnegative"] = adm.integral_nonnegative;
    a["c2"] = adm.c2;
    a["dp_over_rho_bounded"] = adm.dp_over_rho_bounded;
    a["measured_beta"] = adm.measured_beta;
    stages["equilibrium"] = "ok";
    summary["admissibility"] = a;
  } catch (const Error& e) {
    stages["equilibrium"] = std::string("error: ") + e.what();
    summary["stages"] = stages;
    out.summary = summary;
    out.exit_code = 2;
    std::ofstream(cfg.out_dir / "summary.json") << summary.dump(2) << "\n";
    return out;
  }

  // criteria
  try {
    std::vector<CriterionReport> reports;
    ordered_json wit = ordered_json::object();
    for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
      CriterionReport rep = (m == 0) ? sausage_criterion_scan(eq)
                                     : interchange_criterion_scan(eq, m);
      ordered_json w;
      w["verdict"] = to_string(rep.verdict);
      if (rep.witness_r) w["witness_r"] = *rep.witness_r;
      wit[std::to_string(m)] = w;
      reports.push_back(std::move(rep));
    }
    write_criteria_csv(cfg.out_dir / "criteria.csv", reports);
    verdicts["criterion_witnesses"] = wit;
    stages["criteria"] = "ok";
  } catch (const Error& e) {
    stages["criteria"] = std::string("error: ") + e.what();
    partial = true;
  }

  // spectrum sweep
  SweepResult sweep;
  try {
    SolveOptions sopts;
    sopts.grid = cfg.grid;
    sopts.refinements = cfg.refinements;
    sopts.ref_rel_tol = cfg.ref_rel_tol;
    sopts.eig.rel_tol = cfg.eig_rel_tol;
    sopts.n_vac = cfg.n_vac;
    std::vector<int> ms, ks;
    for (int m = cfg.m_min; m <= cfg.m_max; ++m) ms.push_back(m);
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) ks.push_back(k);
    sweep = sweep_modes(eq, ms, ks, sopts, cfg.threads);
    write_spectrum_csv(cfg.out_dir / "spectrum.csv", sweep);
    for (const auto& e : sweep.entries)
      if (e.ok) write_minimizer_csv(cfg.out_dir / "minimizers", e.result);

    bool m0_unstable = false;
    int failures = 0;
    for (const auto& e : sweep.entries) {
      if (!e.ok) {
        ++failures;
        if (e.error.find("not grid-converged") != std::string::npos) nonconverged = true;
        continue;
      }
      if (e.mode.m == 0 && e.result.lambda < 0.0) m0_unstable = true;
    }
    verdicts["m0_instability_found"] = m0_unstable;
    verdicts["sup_mu"] = sweep.sup_mu;
    verdicts["any_unstable"] = sweep.any_unstable;
    if (!sweep.symmetry_warnings.empty()) verdicts["symmetry_warnings"] = sweep.symmetry_warnings;
    if (failures) {
      partial = true;
      ordered_json errs = ordered_json::array();
      for (const auto& e : sweep.entries)
        if (!e.ok)
          errs.push_back("m=" + std::to_string(e.mode.m) + " k=" + std::to_string(e.mode.k) +
                         ": " + e.error);
      stages["sweep"] = errs;
    } else {
      stages["sweep"] = "ok";
    }
  } catch (const Error& e) {
    stages["sweep"] = std::string("error: ") + e.what();
    partial = true;
  }

  // scaling study
  if (cfg.scaling_enabled) {
    try {
      std::vector<ScalingStudy> studies;
      std::vector<int> klist;
      for (int p = cfg.scaling_kpow_min; p <= cfg.scaling_kpow_max; ++p) klist.push_back(1 << p);
      BumpFunction w;
      ordered_json sc = ordered_json::array();
      for (double alpha : cfg.scaling_alphas) {
        ScalingStudy st = fit_scaling_exponent(eq, alpha, w, klist);
        ordered_json s;
        s["alpha"] = alpha;
        s["fitted_lambda_exponent"] = st.fitted_lambda_exponent;
        s["fitted_J_exponent"] = st.fitted_J_exponent;
        s["fitted_E_exponent"] = st.fitted_E_exponent;
        s["expected_exponent"] = st.expected_exponent;
        s["divergent"] = st.divergent;
        s["verdict"] = st.verdict;
        sc.push_back(s);
        studies.push_back(std::move(st));
      }
      write_scaling_csv(cfg.out_dir / "scaling.csv", studies);
      verdicts["scaling"] = sc;
      stages["scaling"] = "ok";
    } catch (const Error& e) {
      stages["scaling"] = std::string("error: ") + e.what();
      partial = true;
    }
  }

  // dynamics cross-check on the unstable modes
  if (cfg.dynamics_enabled) {
    try {
      fs::create_directories(cfg.out_dir / "dynamics");
      ordered_json dyn = ordered_json::array();
      int done = 0;
      for (const auto& e : sweep.entries) {
        if (done >= cfg.dyn_max_modes) break;
        if (!e.ok || !e.result.mu) continue;
        const double mu = *e.result.mu;
        GridSpec gs = cfg.grid;
        gs.n = e.result.n_grid;
        Equilibrium eqd = build_equilibrium(cfg.profile, gs, false);
        OperatorPair op = assemble_operators(eqd, e.mode, cfg.n_vac > 0 ? cfg.n_vac : 2 * gs.n);
        TrialField init = (cfg.dyn_source == "random")
                              ? random_field(eqd, e.mode, cfg.seed + done)
                              : e.result.minimizer;
        EvolveOptions eopts;
        eopts.t_end = cfg.dyn_t_end > 0.0 ? cfg.dyn_t_end : 5.5 / mu;
        eopts.dt = cfg.dyn_dt;
        ModeTrajectory traj = evolve_mode(eqd, e.mode, op, init, nullptr, eopts);
        write_trajectory_csv(cfg.out_dir / "dynamics" /
                                 ("traj_m" + std::to_string(e.mode.m) + "_k" +
                                  std::to_string(e.mode.k) + ".csv"),
                             traj);
        const GrowthFit fit = fit_growth_rate(traj);
        ordered_json d;
        d["m"] = e.mode.m;
        d["k"] = e.mode.k;
        d["mu_spectral"] = mu;
        d["mu_fitted"] = fit.mu;
        d["ci_halfwidth"] = fit.ci_halfwidth;
        dyn.push_back(d);
        ++done;
      }
      verdicts["dynamics"] = dyn;
      stages["dynamics"] = "ok";
    } catch (const Error& e) {
      stages["dynamics"] = std::string("error: ") + e.what();
      partial = true;
    }
  }

  summary["stages"] = stages;
  summary["verdicts"] = verdicts;
  out.summary = summary;
  out.exit_code = nonconverged ? 3 : (partial ? 4 : 0);
  std::ofstream(cfg.out_dir / "summary.json") << summary.dump(2) << "\n";
  return out;
}

void emit_plot_data(const fs::path& dir) {
  if (!fs::exists(dir / "spectrum.csv"))
    throw MissingArtifact("no spectrum.csv under " + dir.string());

  // growth-rate map: one (m, k, mu) triple per unstable mode
  {
    const auto rows = load_spectrum_csv(dir / "spectrum.csv");
    std::ofstream out(dir / "mu_map.dat");
    out << "# m k mu\n";
    for (const auto& r : rows)
      if (r.mu) out << r.m << " " << r.k << " " << format_double(*r.mu) << "\n";
  }

  if (fs::exists(dir / "criteria.csv")) {
    CsvTable t = load_csv(dir / "criteria.csv");
    const int cm = t.column("m"), cr = t.column("r"), cv = t.column("value");
    std::map<int, std::ofstream> files;
    for (size_t i = 0; i < t.rows.size(); ++i) {
      const int m = static_cast<int>(t.num(i, cm));
      auto it = files.find(m);
      if (it == files.end()) {
        it = files.emplace(m, std::ofstream(dir / ("criterion_m" + std::to_string(m) + ".dat")))
                 .first;
        it->second << "# r criterion\n";
      }
      it->second << t.rows[i][cr] << " " << t.rows[i][cv] << "\n";
    }
  }

  if (fs::exists(dir / "scaling.csv")) {
    CsvTable t = load_csv(dir / "scaling.csv");
    const int ca = t.column("alpha"), ck = t.column("k"), cl = t.column("lambda_upper");
    std::ofstream out(dir / "loglog.dat");
    out << "# alpha log_k log_neg_lambda\n";
    for (size_t i = 0; i < t.rows.size(); ++i) {
      const double lam = t.num(i, cl);
      if (lam >= 0.0) continue;
      out << t.rows[i][ca] << " " << format_double(std::log(t.num(i, ck))) << " "
          << format_double(std::log(-lam)) << "\n";
    }
  }
}

}  // namespace zpinch
