#include "zpinch/dynamics.hpp"

#include <cmath>

#include "zpinch/errors.hpp"
#include "zpinch/numerics.hpp"

namespace zpinch {

namespace {

double pencil_omega_max(const OperatorPair& op) {
  // power iteration on M^-1 K gives the dominant |eigenvalue|
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass(op.M);
  if (mass.info() != Eigen::Success) throw Error("mass factorization failed");
  Eigen::VectorXd x = Eigen::VectorXd::Ones(op.dofs()).normalized();
  double lam = 0.0;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd y = mass.solve(op.K * x);
    const double nrm = y.norm();
    if (!(nrm > 0.0)) break;
    x = y / nrm;
    lam = x.dot(op.K * x) / x.dot(op.M * x);
  }
  return std::sqrt(std::abs(lam));
}

}  // namespace

ModeTrajectory evolve_mode(const Equilibrium& eq, ModeIndex mode, const OperatorPair& op,
                           const TrialField& initial, const TrialField* initial_velocity,
                           const EvolveOptions& opts) {
  (void)eq;
  if (initial.n() != op.n)
    throw ConfigError("initial field grid does not match the assembled operators");

  ModeTrajectory traj;
  traj.mode = mode;
  traj.omega_max = pencil_omega_max(op);

  double dt = opts.dt;
  const double dt_stable = 2.0 / std::max(traj.omega_max, 1e-300);
  if (dt <= 0.0) {
    dt = opts.cfl * dt_stable;
  } else if (dt > 0.9 * dt_stable) {
    throw StabilityViolation("dt exceeds the central-difference stability bound");
  }
  const int steps = std::max(2, static_cast<int>(std::ceil(opts.t_end / dt)));
  dt = opts.t_end / steps;
  traj.dt_used = dt;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass(op.M);
  if (mass.info() != Eigen::Success) throw Error("mass factorization failed");

  Eigen::VectorXd a = op.pack(initial);
  Eigen::VectorXd v = initial_velocity ? op.pack(*initial_velocity)
                                       : Eigen::VectorXd::Zero(op.dofs());

  // second-order start: a^1 = a^0 + dt v^0 + dt^2/2 M^-1 (-K a^0)
  Eigen::VectorXd accel = mass.solve(-(op.K * a));
  Eigen::VectorXd a_prev = a;
  Eigen::VectorXd a_curr = a + dt * v + 0.5 * dt * dt * accel;

  const int stride = std::max(1, steps / std::max(1, opts.samples));
  const int n_out = steps / stride + 1;
  traj.t.resize(n_out);
  traj.kinetic.resize(n_out);
  traj.potential.resize(n_out);
  traj.total.resize(n_out);
  traj.log_norm.resize(n_out);
  traj.state.reserve(n_out);
  traj.velocity.reserve(n_out);

  double ledger_scale = 0.0;
  int out = 0;
  auto record = [&](int step, const Eigen::VectorXd& an, const Eigen::VectorXd& vn) {
    const double kin = 0.5 * vn.dot(op.M * vn);
    const double pot = 0.5 * an.dot(op.K * an);
    traj.t[out] = step * dt;
    traj.kinetic[out] = kin;
    traj.potential[out] = pot;
    traj.total[out] = kin + pot;
    traj.log_norm[out] = 0.5 * std::log(std::max(2.0 * kin, 1e-300));
    traj.state.push_back(an);
    traj.velocity.push_back(vn);
    ++out;
  };

  record(0, a, v);
  const double total0 = traj.total[0];

  for (int step = 1; step <= steps; ++step) {
    Eigen::VectorXd a_next = 2.0 * a_curr - a_prev + dt * dt * mass.solve(-(op.K * a_curr));
    // central velocity at the current step
    Eigen::VectorXd v_curr = (a_next - a_prev) / (2.0 * dt);
    a_prev = a_curr;
    a_curr = a_next;
    if (step % stride == 0 && out < n_out) {
      record(step, a_prev, v_curr);
      const double kin = traj.kinetic[out - 1], pot = traj.potential[out - 1];
      ledger_scale = std::max({ledger_scale, kin + std::abs(pot), std::abs(total0)});
      if (std::abs(traj.total[out - 1] - total0) > opts.ledger_rel_tol * ledger_scale)
        throw StabilityViolation("energy ledger drifted beyond tolerance (reduce dt)");
    }
  }
  traj.t.conservativeResize(out);
  traj.kinetic.conservativeResize(out);
  traj.potential.conservativeResize(out);
  traj.total.conservativeResize(out);
  traj.log_norm.conservativeResize(out);
  return traj;
}

GrowthFit fit_growth_rate(const ModeTrajectory& traj) {
  const int n = static_cast<int>(traj.t.size());
  if (n < 8) throw InsufficientGrowth("trajectory too short to fit");

  // amplitude gate: kinetic + |potential| is bounded on a stable spectrum and
  // grows like e^(2 mu t) on an unstable one
  double amp_ref = 0.0, amp_max = 0.0;
  for (int i = 0; i < n; ++i) {
    const double amp = std::sqrt(traj.kinetic[i] + std::abs(traj.potential[i]));
    if (i > 0 && i <= 4) amp_ref = std::max(amp_ref, amp);
    amp_max = std::max(amp_max, amp);
  }
  if (!(amp_max > 10.0 * amp_ref))
    throw InsufficientGrowth("signal never exceeded 10x the initial amplitude");

  // last 40% of the run, geometric subsampling toward the end
  const int lo = static_cast<int>(0.6 * n);
  std::vector<int> idx;
  double pos = n - 1;
  while (pos >= lo) {
    const int i = static_cast<int>(pos);
    if (idx.empty() || idx.back() != i) idx.push_back(i);
    pos /= 1.04;
  }
  if (idx.size() < 4) {
    idx.clear();
    for (int i = lo; i < n; ++i) idx.push_back(i);
  }

  Eigen::ArrayXd tx(idx.size()), ty(idx.size());
  for (size_t j = 0; j < idx.size(); ++j) {
    tx[j] = traj.t[idx[j]];
    ty[j] = traj.log_norm[idx[j]];
  }
  if ((ty.maxCoeff() - ty.minCoeff()) < 3.0 && (traj.log_norm[n - 1] - traj.log_norm[1]) < 3.0)
    throw InsufficientGrowth("fewer than 3 e-folds of growth in the fit window");

  const auto fit = line_fit(tx, ty);
  GrowthFit out;
  out.mu = fit.slope;
  out.ci_halfwidth = 2.0 * fit.slope_stderr;
  out.window_points = static_cast<int>(idx.size());
  return out;
}

}  // namespace zpinch
