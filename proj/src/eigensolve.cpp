#include "zpinch/eigensolve.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "zpinch/errors.hpp"

namespace zpinch {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

double gershgorin_min(const SpMat& A) {
  Eigen::VectorXd diag = A.diagonal();
  Eigen::VectorXd off = Eigen::VectorXd::Zero(A.rows());
  for (int c = 0; c < A.outerSize(); ++c)
    for (SpMat::InnerIterator it(A, c); it; ++it)
      if (it.row() != it.col()) off[it.row()] += std::abs(it.value());
  return (diag - off).minCoeff();
}

double mass_min_eigenvalue(const SpMat& M) {
  Eigen::SimplicialLLT<SpMat> llt(M);
  if (llt.info() != Eigen::Success)
    throw Error("mass matrix is not positive definite (density vanishes on the grid?)");
  Eigen::VectorXd x = Eigen::VectorXd::Ones(M.rows()).normalized();
  double mu = 0.0;
  for (int it = 0; it < 40; ++it) {
    x = llt.solve(x);
    const double nrm = x.norm();
    if (nrm == 0.0) break;
    x /= nrm;
    mu = x.dot(M * x);
  }
  return mu;
}

int count_below(const SpMat& K, const SpMat& M, double sigma, double scale) {
  // Sylvester: #negative pivots of the LDL^T of (K - sigma M) counts the
  // pencil eigenvalues below sigma. Pivots legitimately span many orders of
  // magnitude here, so only an exact breakdown triggers a shift nudge.
  for (int attempt = 0; attempt < 6; ++attempt) {
    SpMat C = K - sigma * M;
    Eigen::SimplicialLDLT<SpMat> ldlt(C);
    if (ldlt.info() == Eigen::Success) {
      const auto& D = ldlt.vectorD();
      bool clean = true;
      int neg = 0;
      for (int i = 0; i < D.size(); ++i) {
        if (D[i] == 0.0 || !std::isfinite(D[i])) clean = false;
        if (D[i] < 0.0) ++neg;
      }
      if (clean) return neg;
    }
    sigma += (attempt + 1) * 1e-11 * std::max(std::abs(sigma), scale);
  }
  throw SolverStall("inertia factorization kept hitting zero pivots");
}

}  // namespace

int eigenvalue_count_below(const SpMat& K, const SpMat& M, double sigma) {
  const double scale = std::max(K.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  return count_below(K, M, sigma, scale);
}

EigenResult smallest_eigenpair(const SpMat& K, const SpMat& M, const EigenOptions& opts) {
  const int n = static_cast<int>(K.rows());
  EigenResult res;

  const bool dense = opts.force_dense || (n < opts.dense_threshold && !opts.force_iterative);
  if (dense) {
    Eigen::MatrixXd Kd(K), Md(M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kd, Md);
    if (ges.info() != Eigen::Success) throw SolverStall("dense generalized eigensolver failed");
    res.lambda = ges.eigenvalues()[0];
    res.x = ges.eigenvectors().col(0);
    res.used_dense = true;
    const double window = std::max(opts.rel_tol * std::abs(res.lambda),
                                   1e-12 * std::abs(ges.eigenvalues()[n - 1]));
    for (int i = 1; i < n && ges.eigenvalues()[i] <= res.lambda + window; ++i)
      res.eigenspace.push_back(ges.eigenvectors().col(i));
    return res;
  }

  const double scale = std::max(K.diagonal().cwiseAbs().maxCoeff(), 1e-300);

  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  if (opts.has_hint() && count_below(K, M, opts.hint_lo, scale) == 0 &&
      count_below(K, M, opts.hint_hi, scale) >= 1) {
    lo = opts.hint_lo;
    hi = opts.hint_hi;
    bracketed = true;
  }

  if (!bracketed) {
    // Gershgorin-based lower bound for the pencil
    const double glbK = gershgorin_min(K);
    double m_low = gershgorin_min(M);
    if (m_low <= 0.0) m_low = mass_min_eigenvalue(M);
    if (m_low <= 0.0)
      throw Error("mass matrix is not positive definite (density vanishes on the grid?)");
    lo = std::min(0.0, glbK / m_low);
    lo -= 1e-6 * std::max(std::abs(lo), scale / m_low) + 1e-300;

    // upper bound from coordinate Rayleigh quotients
    hi = std::numeric_limits<double>::infinity();
    Eigen::VectorXd kd = K.diagonal(), md = M.diagonal();
    for (int i = 0; i < n; ++i) hi = std::min(hi, kd[i] / md[i]);
    hi += 1e-6 * std::max(std::abs(hi), 1e-12 * scale);

    if (count_below(K, M, lo, scale) != 0) throw SolverStall("pencil lower bound failed");
    while (count_below(K, M, hi, scale) < 1)
      hi += std::max(std::abs(hi), 1.0e-9 * scale);
  }

  // bisect to a tight bracket: count(lo) = 0, count(hi) >= 1
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-3 * std::max(std::abs(mid), 1e-12 * scale)) break;
    if (count_below(K, M, mid, scale) >= 1)
      hi = mid;
    else
      lo = mid;
  }

  Eigen::SimplicialLDLT<SpMat> shifted;
  std::mt19937_64 rng(0x5eedf00dULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  int restarts = 0;
  for (;;) {
    SpMat C = K - lo * M;
    shifted.compute(C);
    if (shifted.info() != Eigen::Success) {
      lo -= 1e-9 * std::max(std::abs(lo), scale);
      if (++restarts > 8) throw SolverStall("shifted factorization failed");
      continue;
    }

    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = uni(rng);
    x /= std::sqrt(x.dot(M * x));

    double lambda = 0.0, prev = std::numeric_limits<double>::infinity();
    int stable = 0;
    for (int it = 0; it < opts.max_iter; ++it) {
      Eigen::VectorXd y = shifted.solve(M * x);
      const double mn = std::sqrt(y.dot(M * y));
      if (!(mn > 0.0) || !std::isfinite(mn)) throw SolverStall("inverse iteration broke down");
      x = y / mn;
      lambda = x.dot(K * x);  // x is M-normalized
      ++res.iterations;
      if (std::abs(lambda - prev) <= 0.25 * opts.rel_tol * std::abs(lambda)) {
        if (++stable >= 2) break;
      } else {
        stable = 0;
      }
      prev = lambda;
    }

    // certify with inertia counts at lambda -+ delta
    const double delta = std::max(opts.rel_tol * std::abs(lambda), 1e-13 * scale);
    const int below = count_below(K, M, lambda - delta, scale);
    const int above = count_below(K, M, lambda + delta, scale);
    if (below == 0 && above >= 1) {
      res.lambda = lambda;
      res.x = x;
      if (above >= 2) {
        // degenerate smallest eigenvalue: produce a second, M-orthogonal vector
        Eigen::VectorXd z(n);
        for (int i = 0; i < n; ++i) z[i] = uni(rng);
        for (int it = 0; it < 60; ++it) {
          z -= x * (x.dot(M * z));
          Eigen::VectorXd y = shifted.solve(M * z);
          const double mn = std::sqrt(y.dot(M * y));
          if (!(mn > 0.0)) break;
          z = y / mn;
        }
        z -= x * (x.dot(M * z));
        const double mn = std::sqrt(z.dot(M * z));
        if (mn > 1e-8) res.eigenspace.push_back(z / mn);
      }
      return res;
    }
    if (++restarts > 8) throw SolverStall("inverse iteration failed certification");
    if (below > 0) {
      hi = lambda - delta;
      lo = std::min(lo, hi - std::max(std::abs(hi), 1e-12 * scale));
      // re-bisect into the missed part of the spectrum
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-4 * std::max(std::abs(mid), 1e-12 * scale)) break;
        if (count_below(K, M, mid, scale) >= 1)
          hi = mid;
        else
          lo = mid;
      }
    } else {
      lo -= std::max(1e-6 * std::abs(lo), 1e-10 * scale);
    }
  }
}

}  // namespace zpinch
