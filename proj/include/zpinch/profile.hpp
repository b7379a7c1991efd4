#pragma once

#include <Eigen/Dense>
#include <string>

#include "zpinch/errors.hpp"

namespace zpinch {

enum class ProfileKind { PowerLaw, Exponential, UniformCurrent, Tabulated };

std::string to_string(ProfileKind k);
ProfileKind profile_kind_from_string(const std::string& s);

/// Equilibrium pressure profile on [0, r0].
///
/// Closed-form families (all are C^2 on [0, r0] with p'(0) = 0, so the induced
/// current density stays finite on the axis):
///   power-law        p = C (r0^2 - r^2)^beta            ~ C (2 r0)^beta (r0-r)^beta near r0
///   exponential      p = C exp(beta r / r0^(beta+1)) exp(-(r0-r)^-beta)
///   uniform-current  p = C (1 - (r/r0)^2), the J_z = const pinch with J0 = 2 sqrt(C)/r0
/// Tabulated profiles carry (r, p) samples; p' comes from 4th-order finite
/// differences and evaluation uses cubic Hermite interpolation.
struct PressureProfile {
  ProfileKind kind = ProfileKind::UniformCurrent;
  double C = 1.0;     // amplitude (pressure units)
  double beta = 1.0;  // boundary-vanishing order
  double gamma = 5.0 / 3.0;
  double A = 1.0;  // entropy constant, p = A rho^gamma
  double r0 = 1.0;
  double rw = 2.0;
  bool relaxed = false;  // relax the strict admissibility checks

  Eigen::ArrayXd tab_r, tab_p, tab_dp;

  double p(double r) const;
  double dp(double r) const;
  double d2p(double r) const;

  static PressureProfile power_law(double C, double beta, double gamma, double r0 = 1.0,
                                   double rw = 2.0);
  static PressureProfile exponential(double C, double beta, double gamma, double r0 = 1.0,
                                     double rw = 2.0);
  static PressureProfile uniform_current(double J0, double gamma, double r0 = 1.0,
                                         double rw = 2.0);
  static PressureProfile tabulated(const Eigen::ArrayXd& r, const Eigen::ArrayXd& p, double gamma,
                                   double A = 1.0, double rw = 2.0);
};

}  // namespace zpinch
