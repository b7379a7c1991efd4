#include "zpinch/vacuum.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <vector>

#include "zpinch/errors.hpp"
#include "zpinch/numerics.hpp"
#include "zpinch/quadrature.hpp"

namespace zpinch {

namespace {

constexpr double kTwoPiSq = 2.0 * M_PI * M_PI;

double weight_w(ModeIndex mode, double r) {
  return double(mode.m) * mode.m + double(mode.k) * mode.k * r * r;
}

}  // namespace

double vacuum_energy(ModeIndex mode, const Eigen::ArrayXd& r, const Eigen::ArrayXd& qr) {
  const auto& rule = gauss_rule(4);
  const int n = static_cast<int>(r.size()) - 1;
  double total = 0.0;
  for (int e = 0; e < n; ++e) {
    const double a = r[e], b = r[e + 1], h = b - a;
    const double slope = (qr[e + 1] - qr[e]) / h;
    total += gauss_panel(
        [&](double rr) {
          const double q = qr[e] + slope * (rr - a);
          const double rq_p = q + rr * slope;  // (r Qr)'
          return (q * q + rq_p * rq_p / weight_w(mode, rr)) * rr;
        },
        a, b, rule);
  }
  return kTwoPiSq * total;
}

VacuumResponse vacuum_response(const Equilibrium& eq, ModeIndex mode, int n_vac) {
  if (mode.m == 0) throw ConfigError("vacuum_response needs m != 0");
  const int n = std::max(n_vac, 8);
  VacuumResponse out;
  out.r = Eigen::ArrayXd::LinSpaced(n + 1, eq.r0, eq.rw);

  // assemble the energy form: E^v(q) = q^T S q
  const auto& rule = gauss_rule(4);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(8 * n);
  for (int e = 0; e < n; ++e) {
    const double a = out.r[e], b = out.r[e + 1], h = b - a;
    double loc[2][2] = {{0, 0}, {0, 0}};
    for (Eigen::Index g = 0; g < rule.x.size(); ++g) {
      const double rr = 0.5 * (a + b) + 0.5 * h * rule.x[g];
      const double wq = 0.5 * h * rule.w[g] * rr * kTwoPiSq;
      const double t = (rr - a) / h;
      // q = N0 q_e + N1 q_{e+1};  (r q)' = (N0 + r N0') q_e + (N1 + r N1') q_{e+1}
      const double N[2] = {1.0 - t, t};
      const double D[2] = {(1.0 - t) - rr / h, t + rr / h};
      const double wr = 1.0 / weight_w(mode, rr);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) loc[i][j] += wq * (N[i] * N[j] + wr * D[i] * D[j]);
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) trips.emplace_back(e + i, e + j, loc[i][j]);
  }
  Eigen::SparseMatrix<double> S(n + 1, n + 1);
  S.setFromTriplets(trips.begin(), trips.end());

  // interior solve with q(r0) = 1, q(rw) = 0
  Eigen::SparseMatrix<double> Sii = S.block(1, 1, n - 1, n - 1);
  Eigen::VectorXd rhs = -S.block(1, 0, n - 1, 1).toDense();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Sii);
  if (ldlt.info() != Eigen::Success) throw BVPFailure("vacuum stiffness factorization failed");
  Eigen::VectorXd qi = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success) throw BVPFailure("vacuum boundary-value solve failed");

  out.qr.resize(n + 1);
  out.qr[0] = 1.0;
  out.qr.segment(1, n - 1) = qi.array();
  out.qr[n] = 0.0;

  out.c_raw = vacuum_energy(mode, out.r, out.qr);
  const double scale = mode.m * eq.Bhat_at(eq.r0) / eq.r0;
  out.c = scale * scale * out.c_raw;

  // tangential components from (r Qr)': Qtheta = -m (r Qr)'/w, Qz = -k r (r Qr)'/w
  Eigen::ArrayXd rq = out.r * out.qr;
  out.qtheta.resize(n + 1);
  out.qz.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double d = stencil_derivative(out.r, rq, i, 5);
    const double w = weight_w(mode, out.r[i]);
    out.qtheta[i] = -mode.m * d / w;
    out.qz[i] = -mode.k * out.r[i] * d / w;
  }
  return out;
}

}  // namespace zpinch
