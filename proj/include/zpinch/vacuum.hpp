#pragma once

#include <Eigen/Dense>

#include "zpinch/equilibrium.hpp"
#include "zpinch/field.hpp"

namespace zpinch {

/// Minimum of the vacuum magnetic energy over Qr subject to the interface
/// coupling and the wall condition. Minimizing with Qr(r0) = 1, Qr(rw) = 0
/// gives c_raw; the interface constraint m Bhat xi(r0) = r0 Qr(r0) then makes
///   min E^v = c * xi(r0)^2,  c = (m Bhat(r0) / r0)^2 * c_raw.
struct VacuumResponse {
  double c = 0.0;
  double c_raw = 0.0;
  Eigen::ArrayXd r;                // vacuum nodes, r[0] = r0, r[n] = rw
  Eigen::ArrayXd qr;               // achieved profile with Qr(r0) = 1
  Eigen::ArrayXd qtheta, qz;       // tangential components at the nodes
};

VacuumResponse vacuum_response(const Equilibrium& eq, ModeIndex mode, int n_vac = 512);

/// E^v of a given nodal Qr profile (piecewise linear), including the 2 pi^2.
double vacuum_energy(ModeIndex mode, const Eigen::ArrayXd& r, const Eigen::ArrayXd& qr);

}  // namespace zpinch
