#pragma once

#include <Eigen/Sparse>
#include <vector>

namespace zpinch {

struct EigenOptions {
  double rel_tol = 1e-9;
  int max_iter = 400;
  int dense_threshold = 200;  // dense full-spectrum solve below this size
  bool force_iterative = false;
  bool force_dense = false;
  // optional bracket hint (e.g. from a coarser grid); validated by inertia
  // counts and dropped when wrong
  double hint_lo = 0.0, hint_hi = 0.0;
  bool has_hint() const { return hint_lo < hint_hi; }
};

struct EigenResult {
  double lambda = 0.0;
  Eigen::VectorXd x;                      // M-normalized eigenvector
  std::vector<Eigen::VectorXd> eigenspace;  // extra vectors when degenerate
  int iterations = 0;
  bool used_dense = false;
};

/// Smallest eigenvalue of the symmetric pencil K x = lambda M x (M positive
/// definite). Iterative path: Gershgorin lower bound for the shift, inertia
/// bisection via sparse LDL^T pivot counts, then shifted inverse iteration;
/// the result is certified by re-counting inertia at lambda -+ tol.
EigenResult smallest_eigenpair(const Eigen::SparseMatrix<double>& K,
                               const Eigen::SparseMatrix<double>& M, const EigenOptions& opts);

/// Number of pencil eigenvalues strictly below sigma (Sylvester inertia).
int eigenvalue_count_below(const Eigen::SparseMatrix<double>& K,
                           const Eigen::SparseMatrix<double>& M, double sigma);

}  // namespace zpinch
