#pragma once

#include <Eigen/Sparse>
#include <memory>

#include "zpinch/energy.hpp"
#include "zpinch/vacuum.hpp"

namespace zpinch {

/// Stiffness/mass pencil of one Fourier mode on the trial basis:
///   x . K x = 2 E(field(x)),   x . M x = 2 J(field(x)).
/// Layout: [xi nodes | eta elements | zeta elements (m != 0)]. For m != 0 the
/// vacuum unknowns are condensed into the boundary stiffness vac_c xi(r0)^2
/// (Schur complement of the vacuum energy under the interface coupling), so M
/// stays positive definite.
struct OperatorPair {
  Eigen::SparseMatrix<double> K, M;
  int n = 0;
  ModeIndex mode;
  double vac_c = 0.0;
  std::shared_ptr<const VacuumResponse> vac;

  bool has_axis_dof() const { return mode.m == 1 || mode.m == -1; }
  int dofs() const { return (mode.m == 0 ? 2 * n : 3 * n) + (has_axis_dof() ? 1 : 0); }
  int xi_boundary_dof() const { return n - 1; }
  int xi_axis_dof() const { return 3 * n; }

  TrialField unpack(const Equilibrium& eq, const Eigen::VectorXd& x) const;
  Eigen::VectorXd pack(const TrialField& f) const;
};

OperatorPair assemble_operators(const Equilibrium& eq, ModeIndex mode, int n_vac = 512);

}  // namespace zpinch
