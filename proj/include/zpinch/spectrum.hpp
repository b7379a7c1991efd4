#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zpinch/eigensolve.hpp"
#include "zpinch/operators.hpp"

namespace zpinch {

struct SolveOptions {
  GridSpec grid;
  int refinements = 3;        // levels n, 2n, 4n, ... until lambda settles
  double ref_rel_tol = 1e-6;  // |lambda(2n) - lambda(n)| <= tol |lambda|
  EigenOptions eig;
  int n_vac = 0;  // vacuum BVP nodes; 0 picks 2n
  bool require_convergence = true;
};

/// lambda_{m,k} = inf E / J with the minimizer normalized to J = 1.
struct SpectralResult {
  ModeIndex mode;
  double lambda = 0.0;
  std::optional<double> mu;  // sqrt(-lambda) when lambda < 0
  TrialField minimizer;
  double el_residual = 0.0;
  double bc_residual = 0.0;
  int n_grid = 0;
  std::vector<std::pair<int, double>> history;  // (n, lambda) per refinement
  bool converged = false;
};

SpectralResult solve_mode(const Equilibrium& eq, ModeIndex mode, const SolveOptions& opts);

/// Strong-form residual of the spectral ODE system evaluated at interior
/// nodes of the minimizer (rho-weighted, relative), plus the interface
/// condition residual at r0.
std::pair<double, double> euler_lagrange_residual(const Equilibrium& eq, ModeIndex mode,
                                                  const SpectralResult& res);

struct SweepEntry {
  ModeIndex mode;
  bool ok = false;
  std::string error;
  SpectralResult result;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  double sup_mu = 0.0;
  ModeIndex sup_mode;
  bool any_unstable = false;
  std::vector<std::string> symmetry_warnings;
};

/// Per-mode solves over m_list x k_list; per-mode failures are recorded, not
/// fatal. Solves are independent and may run on several threads.
SweepResult sweep_modes(const Equilibrium& eq, const std::vector<int>& m_list,
                        const std::vector<int>& k_list, const SolveOptions& opts,
                        int threads = 1);

}  // namespace zpinch
