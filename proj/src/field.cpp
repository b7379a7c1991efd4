#include "zpinch/field.hpp"

#include <cmath>
#include <random>

namespace zpinch {

TrialField& TrialField::operator*=(double a) {
  xi *= a;
  xi_axis *= a;
  eta *= a;
  if (zeta.size()) zeta *= a;
  if (qr.size()) qr *= a;
  return *this;
}

TrialField zero_field(const Equilibrium& eq, ModeIndex mode) {
  TrialField f;
  const int n = eq.grid.n();
  f.r = eq.grid.r;
  f.xi = Eigen::ArrayXd::Zero(n);
  f.eta = Eigen::ArrayXd::Zero(n);
  if (mode.m != 0) {
    f.zeta = Eigen::ArrayXd::Zero(n);
    f.vac_r = Eigen::ArrayXd::LinSpaced(33, eq.r0, eq.rw);
    f.qr = Eigen::ArrayXd::Zero(33);
  }
  return f;
}

TrialField random_field(const Equilibrium& eq, ModeIndex mode, std::uint64_t seed, int n_vac,
                        int n_modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n = eq.grid.n();
  const double r0 = eq.r0;

  TrialField f = zero_field(eq, mode);

  Eigen::ArrayXd a(n_modes), b(n_modes), c(n_modes);
  for (int j = 0; j < n_modes; ++j) {
    const double decay = 1.0 / double((j + 1) * (j + 1));
    a[j] = uni(rng) * decay;
    b[j] = uni(rng) * decay;
    c[j] = uni(rng) * decay;
  }

  // xi: half-integer sines vanish at 0 and are free at r0
  for (int i = 0; i < n; ++i) {
    const double t = eq.grid.r[i] / r0;
    double v = 0.0;
    for (int j = 0; j < n_modes; ++j) v += a[j] * std::sin((j + 0.5) * M_PI * t);
    f.xi[i] = v;
  }
  // eta, zeta: cosine series at the nodes
  for (int i = 0; i < n; ++i) {
    const double t = eq.grid.r[i] / r0;
    double ve = 0.0, vz = 0.0;
    for (int j = 0; j < n_modes; ++j) {
      ve += b[j] * std::cos(j * M_PI * t);
      vz += c[j] * std::cos(j * M_PI * t);
    }
    f.eta[i] = ve;
    if (mode.m != 0) f.zeta[i] = vz;
  }

  if (std::abs(mode.m) == 1) f.xi_axis = 0.5 * uni(rng);

  if (mode.m != 0) {
    f.vac_r = Eigen::ArrayXd::LinSpaced(n_vac + 1, eq.r0, eq.rw);
    f.qr = Eigen::ArrayXd::Zero(n_vac + 1);
    const double q0 = mode.m * eq.Bhat_at(eq.r0) * f.xi_boundary() / eq.r0;
    Eigen::ArrayXd d(n_modes);
    for (int j = 0; j < n_modes; ++j) d[j] = uni(rng) / double((j + 1) * (j + 1));
    const double L = eq.rw - eq.r0;
    for (int i = 0; i <= n_vac; ++i) {
      const double s = (f.vac_r[i] - eq.r0) / L;
      double v = q0 * (1.0 - s);
      for (int j = 0; j < n_modes; ++j) v += d[j] * std::sin((j + 1) * M_PI * s);
      f.qr[i] = v;
    }
    f.qr[n_vac] = 0.0;
  }
  return f;
}

}  // namespace zpinch
