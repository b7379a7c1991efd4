#pragma once

#include <Eigen/Dense>
#include <optional>

#include "zpinch/grid.hpp"
#include "zpinch/profile.hpp"

namespace zpinch {

/// Sampled z-pinch equilibrium plus quadrature-consistent pointwise
/// evaluators. Immutable after construction; safe to share across threads.
///
/// Force balance fixes everything in terms of the pressure:
///   B_theta^2(r) = -(2/r^2) int_0^r s^2 p'(s) ds,   J_z = (1/r) d(r B_theta)/dr,
///   rho = (p/A)^(1/gamma),   Bhat_theta(r) = B_theta(r0) r0 / r  in the vacuum.
struct Equilibrium {
  RadialGrid grid;
  Eigen::ArrayXd p, dp, rho, Btheta, Jz;
  Eigen::ArrayXd I;  // cumulative moment: I_i = int_0^{r_i} s^2 p'(s) ds
  double r0 = 1.0, rw = 2.0;
  double gamma = 5.0 / 3.0, A = 1.0;
  double bhat_coeff = 0.0;  // B_theta(r0) * r0
  PressureProfile profile;

  double p_at(double r) const { return profile.p(r); }
  double dp_at(double r) const { return profile.dp(r); }
  double rho_at(double r) const;
  double I_at(double r) const;
  double B2_at(double r) const;
  double Btheta_at(double r) const;
  double Jz_at(double r) const;
  double Bhat_at(double r) const { return Btheta[grid.n() - 1] * (r0 / r); }
};

/// Integrates the equilibrium ODEs from the profile on the requested grid.
/// strict = reject profiles that fail the pointwise admissibility conditions
/// (overridden by profile.relaxed).
Equilibrium build_equilibrium(const PressureProfile& profile, const GridSpec& spec,
                              bool strict = true);

/// d/dr (p + B^2/2) + B^2/r at every node, from a 7-point polynomial
/// derivative of the sampled total pressure. Exact force balance gives zero.
Eigen::ArrayXd force_balance_residual(const Equilibrium& eq);

/// Leading Taylor coefficients at the axis, from Lemma-style expansions
///   B_theta ~ b1 r + b2 r^2,  p' ~ c1 r + c2 r^2
/// with b1 = Jz(0)/2, b2 = Jz'(0)/3, c1 = -Jz(0)^2/2, c2 = -(5/6) Jz'(0) Jz(0).
struct AxisExpansion {
  double Jz0 = 0, dJz0 = 0;
  double B_lin = 0, B_quad = 0;
  double dp_lin = 0, dp_quad = 0;
};
AxisExpansion taylor_axis_coefficients(const Equilibrium& eq);

enum class Verdict { UnstableWitnessFound, CriterionNonnegative, Inconclusive };
std::string to_string(Verdict v);

struct CriterionReport {
  int m = 0;
  Eigen::ArrayXd r;      // scanned radii (interior nodes)
  Eigen::ArrayXd value;  // criterion expression per node
  std::optional<double> witness_r;
  Verdict verdict = Verdict::Inconclusive;
};

/// Scans p' + 2 gamma p B^2 / (r (gamma p + B^2)). Any admissible profile has
/// a strictly negative value somewhere in (0, r0); failing to find one on an
/// admissible profile throws NoWitness.
CriterionReport sausage_criterion_scan(const Equilibrium& eq);

/// Scans 2 p' + m^2 B^2 / r for m != 0.
CriterionReport interchange_criterion_scan(const Equilibrium& eq, int m);

struct AdmissibilityReport {
  bool nonnegative = false;
  bool vanishes_only_at_r0 = false;
  bool dp_nonpositive_near_r0 = false;
  bool ratio_limit_zero = false;  // p/p' -> 0 at r0
  bool integral_nonnegative = false;
  bool c2 = false;  // finite p, p', p'' at r = 0 and r = r0
  bool dp_over_rho_bounded = false;
  bool admissible = false;  // all of the above except dp_over_rho_bounded
  double measured_beta = 0.0;
  double last_p_over_dp = 0.0;
  double dp_over_rho_slope = 0.0;  // slope of log(|p'|/rho) vs log(r0 - r)
};
AdmissibilityReport check_admissibility(const PressureProfile& profile, const Equilibrium& eq);

}  // namespace zpinch
