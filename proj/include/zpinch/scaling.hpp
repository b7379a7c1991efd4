#pragma once

#include <string>
#include <vector>

#include "zpinch/energy.hpp"

namespace zpinch {

/// The standard smooth bump exp(-1/(1-(2s+1)^2)) supported on s in (-1, 0):
/// compactly supported with all derivatives vanishing at both edges.
struct BumpFunction {
  double operator()(double s) const;
  double d(double s) const;
};

/// Boundary-concentrated m = 0 test pair: xi_k(r) = w(k^alpha (r - r0)) and
/// eta_k chosen to annihilate the compressional term of the reduced E_{0,k},
///   eta_k = (1/(k r)) ((r xi_k)' - 2 B^2 xi_k / (gamma p + B^2)).
/// The support [r0 - k^-alpha, r0] must fit inside (0, r0).
TrialField build_test_family(const Equilibrium& eq, double alpha, const BumpFunction& w, int k,
                             int n_local = 96);

struct ScalingPoint {
  int k = 0;
  double J = 0.0;
  double E = 0.0;
  double lambda_upper = 0.0;  // E/J, a true upper bound for lambda_{0,k}
};

struct ScalingStudy {
  double alpha = 0.0;
  std::vector<ScalingPoint> points;
  double fitted_lambda_exponent = 0.0;  // slope of log(-lambda_upper) vs log k
  double fitted_J_exponent = 0.0;       // expected -alpha - alpha beta / gamma
  double fitted_E_exponent = 0.0;       // expected -alpha - alpha (beta - 1)
  double expected_exponent = 0.0;       // alpha beta / gamma - alpha (beta - 1)
  bool divergent = false;
  std::string verdict;
};

/// Evaluates lambda_upper(k) = E_{0,k}/J on the test family and fits the
/// log-log slopes over the top decade of k. The growth rate is unbounded
/// exactly when the fitted lambda exponent is positive.
ScalingStudy fit_scaling_exponent(const Equilibrium& eq, double alpha, const BumpFunction& w,
                                  const std::vector<int>& k_list);

}  // namespace zpinch
