#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "zpinch/equilibrium.hpp"

namespace zpinch {

struct ModeIndex {
  int m = 0;
  int k = 0;
};

/// Discretized perturbation (xi, eta, zeta) on (0, r0] plus the vacuum field
/// Qr on [r0, rw] when m != 0.
///
/// Basis: all components carry nodal values on the same grid. xi is
/// continuous piecewise linear with xi(0) = 0 built in, except for |m| = 1
/// where the axis value xi_axis is a free unknown (the kink displaces the
/// core rigidly; the energy norm does not control xi(0) there, so the
/// completed space contains such fields). eta and zeta (no radial derivative
/// of either enters the forms) are piecewise linear between the nodes and
/// constant on the innermost element, which leaves their axis values
/// unconstrained. Qr is piecewise linear on the vacuum nodes.
struct TrialField {
  Eigen::ArrayXd r;          // plasma nodes (matches the equilibrium grid)
  Eigen::ArrayXd xi;         // nodal, size n
  Eigen::ArrayXd eta;        // nodal, size n
  Eigen::ArrayXd zeta;       // nodal, size n (empty for m = 0)
  Eigen::ArrayXd vac_r, qr;  // vacuum nodes incl. both ends, and nodal Qr
  double xi_axis = 0.0;      // xi(0), nonzero only for |m| = 1

  int n() const { return static_cast<int>(r.size()); }
  double xi_boundary() const { return xi.size() ? xi[xi.size() - 1] : 0.0; }
  double left_value(int e) const { return e == 0 ? xi_axis : xi[e - 1]; }

  TrialField& operator*=(double a);
};

TrialField zero_field(const Equilibrium& eq, ModeIndex mode);

/// Seeded random trial field: truncated sine/cosine series with 1/j^2
/// coefficient decay, sampled onto the grid. For m != 0 the vacuum part
/// satisfies the interface coupling m Bhat xi(r0) = r0 Qr(r0) and Qr(rw) = 0.
TrialField random_field(const Equilibrium& eq, ModeIndex mode, std::uint64_t seed,
                        int n_vac = 64, int n_modes = 12);

}  // namespace zpinch
