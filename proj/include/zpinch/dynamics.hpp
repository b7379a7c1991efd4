#pragma once

#include "zpinch/operators.hpp"

namespace zpinch {

/// Linearized per-mode evolution M a_tt = -K a sampled on output instants,
/// with the kinetic/potential ledger
///   kinetic = J(a_t),  potential = E(a),  total conserved by the flow.
struct ModeTrajectory {
  ModeIndex mode;
  Eigen::ArrayXd t;
  std::vector<Eigen::VectorXd> state;     // coefficient vectors a(t)
  std::vector<Eigen::VectorXd> velocity;  // a_t(t), second-order central
  Eigen::ArrayXd kinetic, potential, total;
  Eigen::ArrayXd log_norm;  // log ||sqrt(rho) g_t||
  double dt_used = 0.0;
  double omega_max = 0.0;  // sqrt of the largest pencil magnitude, stability bound
};

struct EvolveOptions {
  double t_end = 10.0;
  double dt = 0.0;  // 0 -> cfl * 2/omega_max
  double cfl = 0.1;
  int samples = 400;
  double ledger_rel_tol = 1e-4;  // abort threshold for mid-run drift
};

/// Explicit central-difference (leapfrog) integration with M factored once.
/// The scheme is time-reversible and keeps the ledger drift at O(dt^2).
ModeTrajectory evolve_mode(const Equilibrium& eq, ModeIndex mode, const OperatorPair& op,
                           const TrialField& initial, const TrialField* initial_velocity,
                           const EvolveOptions& opts);

struct GrowthFit {
  double mu = 0.0;
  double ci_halfwidth = 0.0;  // ~95% confidence from the fit residuals
  int window_points = 0;
};

/// Least-squares slope of log ||sqrt(rho) g_t|| over the last 40% of the
/// trajectory (geometric subsampling); needs >= 3 e-folds of growth.
GrowthFit fit_growth_rate(const ModeTrajectory& traj);

}  // namespace zpinch
