#include "zpinch/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "zpinch/errors.hpp"
#include "zpinch/numerics.hpp"
#include "zpinch/quadrature.hpp"

namespace zpinch {

namespace {

constexpr int kMomentQuad = 6;  // Gauss order for the s^2 p' moment integrals

int locate_element(const RadialGrid& g, double r) {
  // element e covers (left(e), right(e)]
  const auto& nodes = g.r;
  int lo = 0, hi = g.n() - 1;
  if (r <= nodes[0]) return 0;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (nodes[mid] < r ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

double Equilibrium::rho_at(double r) const {
  const double pv = std::max(p_at(r), 0.0);
  return std::pow(pv / A, 1.0 / gamma);
}

double Equilibrium::I_at(double r) const {
  if (r <= 0.0) return 0.0;
  const auto& rule = gauss_rule(kMomentQuad);
  const auto f = [this](double s) { return s * s * profile.dp(s); };
  const int e = locate_element(grid, r);
  const double base = (e == 0) ? 0.0 : I[e - 1];
  return base + gauss_panel(f, grid.left(e), std::min(r, grid.r0), rule);
}

double Equilibrium::B2_at(double r) const {
  if (r <= 0.0) return 0.0;
  return std::max(-2.0 * I_at(r) / (r * r), 0.0);
}

double Equilibrium::Btheta_at(double r) const { return std::sqrt(B2_at(r)); }

double Equilibrium::Jz_at(double r) const {
  if (r <= 0.0) {
    const double d2 = profile.d2p(0.0);
    return (d2 < 0.0) ? std::sqrt(-2.0 * d2) : 0.0;
  }
  const double Iv = I_at(r);
  const double F = -2.0 * Iv / (r * r);
  if (F <= 0.0) return 0.0;
  const double Fp = 4.0 * Iv / (r * r * r) - 2.0 * profile.dp(r);
  return 0.5 * Fp / std::sqrt(F) + std::sqrt(F) / r;
}

Equilibrium build_equilibrium(const PressureProfile& profile, const GridSpec& spec, bool strict) {
  Equilibrium eq;
  eq.grid = make_grid(spec, profile.r0);
  eq.profile = profile;
  eq.r0 = profile.r0;
  eq.rw = profile.rw;
  eq.gamma = profile.gamma;
  eq.A = profile.A;

  const int n = eq.grid.n();
  eq.p.resize(n);
  eq.dp.resize(n);
  eq.rho.resize(n);
  eq.Btheta.resize(n);
  eq.Jz.resize(n);
  eq.I.resize(n);

  // cumulative moment integral, one Gauss panel per element
  const auto& rule = gauss_rule(kMomentQuad);
  const auto f = [&profile](double s) { return s * s * profile.dp(s); };
  double acc = 0.0;
  for (int e = 0; e < n; ++e) {
    acc += gauss_panel(f, eq.grid.left(e), eq.grid.right(e), rule);
    eq.I[e] = acc;
  }

  const double i_scale = std::max(eq.I.abs().maxCoeff(), 1e-300);
  for (int i = 0; i < n; ++i) {
    if (eq.I[i] > 1e-12 * i_scale)
      throw NonpositiveIntegrand("-(2/r^2) int_0^r s^2 p' ds < 0 at r = " +
                                 std::to_string(eq.grid.r[i]));
    const double r = eq.grid.r[i];
    eq.p[i] = profile.p(r);
    eq.dp[i] = profile.dp(r);
    eq.rho[i] = eq.rho_at(r);
    eq.Btheta[i] = std::sqrt(std::max(-2.0 * eq.I[i] / (r * r), 0.0));
    eq.Jz[i] = eq.Jz_at(r);
  }
  eq.bhat_coeff = eq.Btheta[n - 1] * eq.r0;

  if (strict && !profile.relaxed) {
    const double p_scale = std::max(eq.p.maxCoeff(), 1e-300);
    bool ok = eq.p.minCoeff() > -1e-12 * p_scale;
    ok = ok && std::abs(profile.p(eq.r0)) <= 1e-10 * p_scale;
    // p > 0 inside, allowing a thin underflow band at the edge (steep
    // admissible profiles drop below the double range well before r0)
    double r_pos = 0.0;
    for (int i = 0; i + 1 < n; ++i)
      if (eq.p[i] > 0.0) r_pos = eq.grid.r[i];
    ok = ok && (eq.r0 - r_pos) <= 0.01 * eq.r0;
    for (int i = 0; i + 1 < n; ++i)
      if (eq.grid.r[i] <= r_pos) ok = ok && eq.p[i] > 0.0;
    // p' <= 0 in the outer tenth
    for (int i = 0; i < n; ++i)
      if (eq.grid.r[i] > 0.9 * eq.r0) ok = ok && eq.dp[i] <= 1e-12 * p_scale / eq.r0;
    ok = ok && std::isfinite(profile.d2p(0.0)) && std::isfinite(profile.d2p(eq.r0));
    if (!ok)
      throw AdmissibilityViolation(
          "pressure profile fails the admissibility conditions (use relaxed mode to force)");
  }
  return eq;
}

Eigen::ArrayXd force_balance_residual(const Equilibrium& eq) {
  const int n = eq.grid.n();
  Eigen::ArrayXd total(n), res(n);
  Eigen::ArrayXd b2 = eq.Btheta * eq.Btheta;
  total = eq.p + 0.5 * b2;
  for (int i = 0; i < n; ++i)
    res[i] = stencil_derivative(eq.grid.r, total, i, 7) + b2[i] / eq.grid.r[i];
  return res;
}

AxisExpansion taylor_axis_coefficients(const Equilibrium& eq) {
  const int n = eq.grid.n();
  std::vector<double> a_est, b_est;
  for (int j = 0; j <= 5; ++j) {
    const double delta = 0.2 * eq.r0 / std::pow(2.0, j);
    int count = 0;
    while (count < n && eq.grid.r[count] <= delta) ++count;
    if (count < 6) break;
    const auto c = polyfit(eq.grid.r.head(count), eq.Jz.head(count), 2);
    a_est.push_back(c[0]);
    b_est.push_back(c[1]);
  }
  if (a_est.size() < 3)
    throw AxisSingularity("too few nodes near the axis to expand J_z");

  // Window halving trades truncation against sampling noise; take the
  // estimate where consecutive windows agree best. No near-agreement anywhere
  // means J_z'(0) has no limit (axis-singular current).
  const double scale =
      std::max({std::abs(a_est[0]), std::abs(b_est[0]) * eq.r0, 1e-300});
  size_t best = 1;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t j = 1; j < a_est.size(); ++j) {
    const double d = std::abs(a_est[j] - a_est[j - 1]) +
                     std::abs(b_est[j] - b_est[j - 1]) * eq.r0;
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  if (best_d > 0.05 * scale)
    throw AxisSingularity("finite-difference estimate of J_z'(0) does not converge");

  AxisExpansion ax;
  ax.Jz0 = a_est[best];
  ax.dJz0 = b_est[best];
  ax.B_lin = 0.5 * ax.Jz0;
  ax.B_quad = ax.dJz0 / 3.0;
  ax.dp_lin = -0.5 * ax.Jz0 * ax.Jz0;
  ax.dp_quad = -(5.0 / 6.0) * ax.dJz0 * ax.Jz0;
  return ax;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::UnstableWitnessFound: return "unstable-witness-found";
    case Verdict::CriterionNonnegative: return "criterion-nonnegative";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Shared scan plumbing. mag_scale is the size of the criterion's constituent
// terms before cancellation; the witness threshold is relative to it so that
// exact cancellations (roundoff residue) never count as negative values.
CriterionReport finish_scan(int m, Eigen::ArrayXd r, Eigen::ArrayXd value, double mag_scale) {
  CriterionReport rep;
  rep.m = m;
  rep.r = std::move(r);
  rep.value = std::move(value);
  mag_scale = std::max(mag_scale, 1e-300);
  int imin = 0;
  rep.value.minCoeff(&imin);
  if (rep.value[imin] < -1e-10 * mag_scale) {
    rep.witness_r = rep.r[imin];
    rep.verdict = Verdict::UnstableWitnessFound;
  } else if (rep.value.abs().maxCoeff() <= 1e-12 * std::max(mag_scale, 1.0)) {
    rep.verdict = Verdict::Inconclusive;
  } else {
    rep.verdict = Verdict::CriterionNonnegative;
  }
  return rep;
}

}  // namespace

CriterionReport sausage_criterion_scan(const Equilibrium& eq) {
  const int n = eq.grid.n();
  const int ni = n - 1;  // strictly interior nodes
  Eigen::ArrayXd r(ni), value(ni);
  const double p_scale = std::max(eq.p.maxCoeff(), 1e-300);
  bool degenerate = true;
  double mag = 0.0;
  for (int i = 0; i < ni; ++i) {
    r[i] = eq.grid.r[i];
    const double b2 = eq.Btheta[i] * eq.Btheta[i];
    const double denom = eq.gamma * eq.p[i] + b2;
    const double term = (denom > 1e-14 * p_scale)
                            ? 2.0 * eq.gamma * eq.p[i] * b2 / (r[i] * denom)
                            : 0.0;
    value[i] = eq.dp[i] + term;
    mag = std::max(mag, std::abs(eq.dp[i]) + std::abs(term));
    if (std::abs(eq.p[i]) > 1e-14 * p_scale || b2 > 1e-14 * p_scale) degenerate = false;
  }
  auto rep = finish_scan(0, std::move(r), std::move(value), mag);
  if (rep.verdict != Verdict::UnstableWitnessFound && !degenerate) {
    // Lemma guarantees a witness for admissible p; a nonnegative scan means
    // the grid missed the sign change.
    throw NoWitness("sausage criterion scan found no negative value; refine the grid");
  }
  return rep;
}

CriterionReport interchange_criterion_scan(const Equilibrium& eq, int m) {
  if (m == 0) throw ConfigError("interchange criterion needs m != 0");
  const int n = eq.grid.n();
  const int ni = n - 1;
  Eigen::ArrayXd r(ni), value(ni);
  double mag = 0.0;
  for (int i = 0; i < ni; ++i) {
    r[i] = eq.grid.r[i];
    const double b2 = eq.Btheta[i] * eq.Btheta[i];
    const double field_term = double(m) * double(m) * b2 / r[i];
    value[i] = 2.0 * eq.dp[i] + field_term;
    mag = std::max(mag, 2.0 * std::abs(eq.dp[i]) + field_term);
  }
  return finish_scan(m, std::move(r), std::move(value), mag);
}

AdmissibilityReport check_admissibility(const PressureProfile& profile, const Equilibrium& eq) {
  AdmissibilityReport rep;
  const int n = eq.grid.n();
  const double p_scale = std::max(eq.p.maxCoeff(), 1e-300);

  rep.nonnegative = eq.p.minCoeff() > -1e-12 * p_scale;
  rep.vanishes_only_at_r0 = std::abs(profile.p(eq.r0)) <= 1e-10 * p_scale;
  {
    // positive strictly inside, modulo the floating-point underflow band
    double r_pos = 0.0;
    for (int i = 0; i + 1 < n; ++i)
      if (eq.p[i] > 0.0) r_pos = eq.grid.r[i];
    rep.vanishes_only_at_r0 = rep.vanishes_only_at_r0 && (eq.r0 - r_pos) <= 0.01 * eq.r0;
    for (int i = 0; i + 1 < n; ++i)
      if (eq.grid.r[i] <= r_pos)
        rep.vanishes_only_at_r0 = rep.vanishes_only_at_r0 && eq.p[i] > 0.0;
  }
  rep.integral_nonnegative = eq.I.maxCoeff() <= 1e-12 * std::max(eq.I.abs().maxCoeff(), 1e-300);
  rep.c2 = std::isfinite(profile.p(0.0)) && std::isfinite(profile.dp(0.0)) &&
           std::isfinite(profile.d2p(0.0)) && std::isfinite(profile.d2p(eq.r0));

  // approach sequence r_j = r0 - eps 2^-j per the admissibility recipe
  const double eps = 0.1 * eq.r0;
  const int jmax = 12;
  Eigen::ArrayXd dist(jmax + 1), ratio(jmax + 1), dp_rho(jmax + 1), logp(jmax + 1);
  rep.dp_nonpositive_near_r0 = true;
  for (int j = 0; j <= jmax; ++j) {
    const double d = eps * std::pow(2.0, -j);
    const double r = eq.r0 - d;
    const double pv = profile.p(r), dpv = profile.dp(r);
    dist[j] = d;
    if (dpv != 0.0)
      ratio[j] = pv / dpv;
    else
      // p and p' both below the double range: the limit is trivially reached
      ratio[j] = (pv == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    const double rhov = eq.rho_at(r);
    // rho underflows only when p decays faster than any power, and then
    // |p'|/rho = |h'| A^(1/gamma) p^(1-1/gamma) -> 0 for gamma > 1
    dp_rho[j] = (rhov > 0.0) ? std::abs(dpv) / rhov : 0.0;
    logp[j] = (pv > 0.0) ? std::log(pv) : -745.0;
    if (dpv > 1e-12 * p_scale / eq.r0) rep.dp_nonpositive_near_r0 = false;
  }

  // p/p' -> 0: monotone decay of |p/p'| below 1e-3 r0
  rep.ratio_limit_zero = true;
  for (int j = 1; j <= jmax; ++j)
    if (std::abs(ratio[j]) > std::abs(ratio[j - 1]) * 1.001) rep.ratio_limit_zero = false;
  rep.last_p_over_dp = ratio[jmax];
  rep.ratio_limit_zero = rep.ratio_limit_zero && std::abs(ratio[jmax]) < 1e-3 * eq.r0;

  // measured boundary-vanishing order: slope of log p vs log(r0 - r)
  {
    Eigen::ArrayXd lx = dist.tail(6).log();
    Eigen::ArrayXd ly = logp.tail(6);
    rep.measured_beta = line_fit(lx, ly).slope;
  }

  // |p'|/rho bounded iff its log-log slope vs (r0 - r) is >= 0
  {
    std::vector<double> lx, ly;
    for (int j = jmax - 6; j <= jmax; ++j)
      if (std::isfinite(dp_rho[j]) && dp_rho[j] > 0.0) {
        lx.push_back(std::log(dist[j]));
        ly.push_back(std::log(dp_rho[j]));
      }
    if (lx.size() >= 3) {
      Eigen::Map<Eigen::ArrayXd> mx(lx.data(), lx.size()), my(ly.data(), ly.size());
      rep.dp_over_rho_slope = line_fit(mx, my).slope;
      rep.dp_over_rho_bounded = rep.dp_over_rho_slope >= -0.02;
    } else {
      // ratio fell out of the double range: it went to zero, hence bounded
      rep.dp_over_rho_slope = std::numeric_limits<double>::quiet_NaN();
      rep.dp_over_rho_bounded = dp_rho.tail(3).maxCoeff() <= 1.0;
    }
  }

  rep.admissible = rep.nonnegative && rep.vanishes_only_at_r0 && rep.dp_nonpositive_near_r0 &&
                   rep.ratio_limit_zero && rep.integral_nonnegative && rep.c2;
  return rep;
}

}  // namespace zpinch
