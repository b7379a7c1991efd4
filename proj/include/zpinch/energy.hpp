#pragma once

#include "zpinch/equilibrium.hpp"
#include "zpinch/field.hpp"

namespace zpinch {

/// Per-mode quadratic energy split E = E^p + E^s + E^v plus the constraint
/// functional J = 2 pi^2 int rho (xi^2 + eta^2 + zeta^2) r dr.
///
/// Each assembly also evaluates the algebraically equivalent decomposed form
/// of the fluid energy (the beta_0 form with its interface boundary term) by
/// independent quadrature; fluid_alt/total_alt carry that value so the two
/// routes can be cross-validated.
struct EnergyBreakdown {
  double fluid = 0.0;
  double surface = 0.0;
  double vacuum = 0.0;
  double total = 0.0;
  double constraint = 0.0;
  double fluid_alt = 0.0;
  double total_alt = 0.0;
};

EnergyBreakdown assemble_E0k(const Equilibrium& eq, ModeIndex mode, const TrialField& f);
EnergyBreakdown assemble_Emk(const Equilibrium& eq, ModeIndex mode, const TrialField& f);
EnergyBreakdown assemble_energy(const Equilibrium& eq, ModeIndex mode, const TrialField& f);

double assemble_J(const Equilibrium& eq, const TrialField& f);

/// Weighted-Sobolev norm of the field (X_k for m = 0, Y_{m,k} otherwise) and
/// the compact-embedding norm of xi (Z for m = 0, V otherwise) at split s1.
struct WeightedNorms {
  double space_norm = 0.0;    // ||(xi,eta[,zeta])||_{X_k or Y_{m,k}}
  double compact_norm = 0.0;  // ||xi||_{Z or V}
};
WeightedNorms weighted_norms(const Equilibrium& eq, ModeIndex mode, const TrialField& f,
                             double s1);

/// g(r) = sup_{r <= s <= r0} p(s) / (-p'(s))
double weight_ratio_sup(const Equilibrium& eq, double r);

/// Both sides of the weighted boundary estimate
///   int_{s1}^{r0} (-p') xi^2 dr <= 2 p(s1) xi(s1)^2 + 4 g(s1) int_{s1}^{r0} p xi'^2 dr.
struct WeightEstimate {
  double lhs = 0.0;
  double rhs = 0.0;
  double g = 0.0;
};
WeightEstimate weight_dp_estimate(const Equilibrium& eq, const TrialField& f, double s1);

/// Pieces of the minimizing-sequence coercivity bound, reported as a logged
/// diagnostic (the constant in front is not computable).
struct CoercivityTerms {
  double space_norm_sq = 0.0;
  double constraint = 0.0;
  double correction = 0.0;  // int (2 p' xi^2 + gamma p k^2 eta^2 r) dr
};
CoercivityTerms coercivity_terms(const Equilibrium& eq, ModeIndex mode, const TrialField& f);

}  // namespace zpinch
