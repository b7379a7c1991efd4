#include "zpinch/spectrum.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "zpinch/errors.hpp"
#include "zpinch/numerics.hpp"

namespace zpinch {

namespace {

Eigen::VectorXd tie_break(const std::vector<Eigen::VectorXd>& basis, int boundary_dof) {
  // pick the unit vector in the eigenspace with the largest |xi(r0)|
  Eigen::VectorXd best = basis[0];
  Eigen::VectorXd c(basis.size());
  for (size_t i = 0; i < basis.size(); ++i) c[i] = basis[i][boundary_dof];
  if (c.norm() < 1e-14) return best;
  c.normalize();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(best.size());
  for (size_t i = 0; i < basis.size(); ++i) v += c[i] * basis[i];
  return v;
}

}  // namespace

SpectralResult solve_mode(const Equilibrium& eq, ModeIndex mode, const SolveOptions& opts) {
  SpectralResult res;
  res.mode = mode;

  double prev_lambda = 0.0;
  bool have_prev = false;
  double last_delta = 0.0;
  for (int level = 0; level <= opts.refinements; ++level) {
    GridSpec spec = opts.grid;
    spec.n = opts.grid.n << level;
    Equilibrium eql = build_equilibrium(eq.profile, spec, /*strict=*/false);
    const int n_vac = opts.n_vac > 0 ? opts.n_vac : 2 * spec.n;
    OperatorPair op = assemble_operators(eql, mode, n_vac);
    EigenOptions eig = opts.eig;
    if (have_prev) {
      // bracket hint from the coarser level; validated inside the solver
      const double margin =
          std::max({4.0 * last_delta, 0.05 * std::abs(prev_lambda), 1e-10});
      eig.hint_lo = prev_lambda - margin;
      eig.hint_hi = prev_lambda + margin;
    }
    EigenResult er = smallest_eigenpair(op.K, op.M, eig);

    Eigen::VectorXd x = er.x;
    if (!er.eigenspace.empty()) {
      std::vector<Eigen::VectorXd> basis = {er.x};
      basis.insert(basis.end(), er.eigenspace.begin(), er.eigenspace.end());
      x = tie_break(basis, op.xi_boundary_dof());
    }
    // normalize to J = 1 (x.Mx = 2) and fix the sign deterministically
    const double jval = 0.5 * x.dot(op.M * x);
    x /= std::sqrt(jval);
    const double xb = x[op.xi_boundary_dof()];
    const double xmax = x.head(op.n).cwiseAbs().maxCoeff();
    double sgn = 1.0;
    if (std::abs(xb) > 1e-9 * xmax) {
      sgn = (xb > 0.0) ? 1.0 : -1.0;
    } else {
      int imax = 0;
      x.head(op.n).cwiseAbs().maxCoeff(&imax);
      sgn = (x[imax] > 0.0) ? 1.0 : -1.0;
    }
    x *= sgn;

    res.lambda = er.lambda;
    res.minimizer = op.unpack(eql, x);
    res.n_grid = spec.n;
    res.history.emplace_back(spec.n, er.lambda);

    if (have_prev &&
        std::abs(er.lambda - prev_lambda) <= opts.ref_rel_tol * std::abs(er.lambda)) {
      res.converged = true;
      break;
    }
    last_delta = have_prev ? std::abs(er.lambda - prev_lambda) : 0.0;
    prev_lambda = er.lambda;
    have_prev = true;
  }

  if (!res.converged && opts.require_convergence) {
    std::ostringstream msg;
    msg << "lambda(m=" << mode.m << ",k=" << mode.k << ") not grid-converged:";
    for (auto& [n, l] : res.history) msg << " (" << n << ", " << l << ")";
    throw NonConvergedGrid(msg.str());
  }

  res.mu = (res.lambda < 0.0) ? std::optional<double>(std::sqrt(-res.lambda)) : std::nullopt;
  auto [el, bc] = euler_lagrange_residual(eq, mode, res);
  res.el_residual = el;
  res.bc_residual = bc;
  return res;
}

std::pair<double, double> euler_lagrange_residual(const Equilibrium& eq, ModeIndex mode,
                                                  const SpectralResult& res) {
  const TrialField& f = res.minimizer;
  const int n = f.n();
  const double lambda = res.lambda;
  const double k = mode.k, m = mode.m;
  const Eigen::ArrayXd& r = f.r;

  const Eigen::ArrayXd& eta_n = f.eta;
  Eigen::ArrayXd zeta_n = (mode.m != 0) ? f.zeta : Eigen::ArrayXd::Zero(n);

  // smoothed nodal xi' (least-squares quadratic over 5 nodes)
  Eigen::ArrayXd dxi(n);
  for (int i = 0; i < n; ++i) dxi[i] = ls_derivative(r, f.xi, i, 5, 2);

  Eigen::ArrayXd p(n), dp(n), B2(n), rho(n), Jz(n);
  for (int i = 0; i < n; ++i) {
    p[i] = eq.p_at(r[i]);
    dp[i] = eq.dp_at(r[i]);
    B2[i] = eq.B2_at(r[i]);
    rho[i] = eq.rho_at(r[i]);
    Jz[i] = eq.Jz_at(r[i]);
  }

  double num = 0.0, den = 0.0;
  const int i0 = 2, i1 = n - 3;  // drop reconstruction-edge nodes

  if (mode.m == 0) {
    // composite flux G1 = gp [k eta - (r xi)'/r] + B^2 [k eta - xi' + xi/r]
    Eigen::ArrayXd G1(n);
    for (int i = 0; i < n; ++i) {
      const double divg = k * eta_n[i] - dxi[i] - f.xi[i] / r[i];
      const double magn = k * eta_n[i] - dxi[i] + f.xi[i] / r[i];
      G1[i] = eq.gamma * p[i] * divg + B2[i] * magn;
    }
    for (int i = i0; i <= i1; ++i) {
      const double dG1 = ls_derivative(r, G1, i, 5, 2);
      const double magn = k * eta_n[i] - dxi[i] + f.xi[i] / r[i];
      const double R1 = -dG1 - (2.0 * B2[i] / r[i]) * magn - 2.0 * dp[i] * f.xi[i] / r[i] +
                        rho[i] * lambda * f.xi[i];
      const double R2 = -k * (eq.gamma * p[i] + B2[i]) * (k * eta_n[i] - dxi[i] - f.xi[i] / r[i]) -
                        2.0 * k * B2[i] * f.xi[i] / r[i] + rho[i] * lambda * eta_n[i];
      const double w = 0.5 * (r[std::min(i + 1, n - 1)] - r[std::max(i - 1, 0)]);
      num += w * rho[i] * (R1 * R1 + R2 * R2) * r[i];
      den += w * rho[i] * (f.xi[i] * f.xi[i] + eta_n[i] * eta_n[i]) * r[i];
    }
  } else {
    Eigen::ArrayXd G(n);
    for (int i = 0; i < n; ++i) {
      const double rxi_p_r = dxi[i] + f.xi[i] / r[i];
      G[i] = (eq.gamma * p[i] + B2[i]) * rxi_p_r - k * (eq.gamma * p[i] + B2[i]) * eta_n[i] +
             (m / r[i]) * eq.gamma * p[i] * zeta_n[i];
    }
    for (int i = i0; i <= i1; ++i) {
      const double B = std::sqrt(B2[i]);
      const double rxi_p_r = dxi[i] + f.xi[i] / r[i];
      const double dG = ls_derivative(r, G, i, 5, 2);
      // r (B^2/r^2)' = 2 B Jz / r - 4 B^2 / r^2
      const double rB2r2p = 2.0 * B * Jz[i] / r[i] - 4.0 * B2[i] / (r[i] * r[i]);
      const double R1 = dG - (m * m / (r[i] * r[i])) * B2[i] * f.xi[i] - rB2r2p * f.xi[i] -
                        (2.0 * k * B2[i] / r[i]) * eta_n[i] + rho[i] * lambda * f.xi[i];
      const double R2 = k * (eq.gamma * p[i] + B2[i]) * rxi_p_r - 2.0 * k * B2[i] * f.xi[i] / r[i] -
                        (k * k * (eq.gamma * p[i] + B2[i]) + m * m * B2[i] / (r[i] * r[i])) * eta_n[i] +
                        (m * k / r[i]) * eq.gamma * p[i] * zeta_n[i] + rho[i] * lambda * eta_n[i];
      const double R3 = -(m * eq.gamma * p[i] / (r[i] * r[i])) * (r[i] * rxi_p_r) +
                        (m * k / r[i]) * eq.gamma * p[i] * eta_n[i] -
                        (m * m / (r[i] * r[i])) * eq.gamma * p[i] * zeta_n[i] +
                        rho[i] * lambda * zeta_n[i];
      const double w = 0.5 * (r[std::min(i + 1, n - 1)] - r[std::max(i - 1, 0)]);
      num += w * rho[i] * (R1 * R1 + R2 * R2 + R3 * R3) * r[i];
      den += w * rho[i] *
             (f.xi[i] * f.xi[i] + eta_n[i] * eta_n[i] + zeta_n[i] * zeta_n[i]) * r[i];
    }
  }
  const double el = std::sqrt(num) / std::max(std::abs(lambda) * std::sqrt(den), 1e-300);

  // interface condition at r0
  double bc = 0.0;
  {
    const double r0 = eq.r0;
    const double B2b = B2[n - 1];
    const double xib = f.xi[n - 1];
    const double dxib = ls_derivative(r, f.xi, n - 1, 5, 2);
    const double etab = eta_n[n - 1];
    if (mode.m == 0) {
      const double expr = B2b * (k * etab * r0 - dxib * r0 + xib);
      const double scale = B2b * (std::abs(k * etab * r0) + std::abs(dxib * r0) + std::abs(xib));
      bc = std::abs(expr) / std::max(scale, 1e-300);
    } else {
      // B^2 xi - B^2 xi' r + k B^2 eta r = Bhat Qtheta r, Qtheta from the vacuum side
      Eigen::ArrayXd rq = f.vac_r * f.qr;
      const double d = stencil_derivative(f.vac_r, rq, 0, 5);
      const double mk2 = m * m + k * k * r0 * r0;
      const double qtheta = -m * d / mk2;
      const double lhs = B2b * xib - B2b * dxib * r0 + k * B2b * etab * r0;
      const double rhs = eq.Bhat_at(r0) * qtheta * r0;
      const double scale = std::abs(B2b * xib) + std::abs(B2b * dxib * r0) +
                           std::abs(k * B2b * etab * r0) + std::abs(rhs);
      bc = std::abs(lhs - rhs) / std::max(scale, 1e-300);
    }
  }
  return {el, bc};
}

SweepResult sweep_modes(const Equilibrium& eq, const std::vector<int>& m_list,
                        const std::vector<int>& k_list, const SolveOptions& opts, int threads) {
  SweepResult sw;
  for (int m : m_list)
    for (int k : k_list) {
      SweepEntry e;
      e.mode = ModeIndex{m, k};
      sw.entries.push_back(std::move(e));
    }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= sw.entries.size()) return;
      SweepEntry& e = sw.entries[i];
      try {
        e.result = solve_mode(eq, e.mode, opts);
        e.ok = true;
      } catch (const Error& err) {
        e.error = err.what();
      }
    }
  };
  threads = std::max(1, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& e : sw.entries) {
    if (!e.ok || !e.result.mu) continue;
    sw.any_unstable = true;
    if (*e.result.mu > sw.sup_mu) {
      sw.sup_mu = *e.result.mu;
      sw.sup_mode = e.mode;
    }
  }

  // lambda should be invariant under k -> -k and (m,k) -> (-m,-k)
  auto find = [&](int m, int k) -> const SweepEntry* {
    for (const auto& e : sw.entries)
      if (e.mode.m == m && e.mode.k == k && e.ok) return &e;
    return nullptr;
  };
  for (const auto& e : sw.entries) {
    if (!e.ok) continue;
    for (auto [mm, kk] : {std::pair{e.mode.m, -e.mode.k}, std::pair{-e.mode.m, -e.mode.k}}) {
      if (mm == e.mode.m && kk == e.mode.k) continue;
      const SweepEntry* other = find(mm, kk);
      if (!other) continue;
      const double d = std::abs(e.result.lambda - other->result.lambda);
      const double s = std::max({std::abs(e.result.lambda), std::abs(other->result.lambda), 1e-300});
      if (d > 100.0 * opts.ref_rel_tol * s) {
        std::ostringstream msg;
        msg << "lambda(" << e.mode.m << "," << e.mode.k << ") = " << e.result.lambda
            << " differs from lambda(" << mm << "," << kk << ") = " << other->result.lambda;
        sw.symmetry_warnings.push_back(msg.str());
      }
    }
  }
  return sw;
}

}  // namespace zpinch
