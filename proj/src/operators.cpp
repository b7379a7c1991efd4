#include "zpinch/operators.hpp"

#include <cmath>
#include <vector>

#include "zpinch/errors.hpp"
#include "zpinch/quadrature.hpp"

namespace zpinch {

namespace {

constexpr double kTwoPiSq = 2.0 * M_PI * M_PI;
constexpr int kQuad = 8;

// one quadratic term c * (sum alpha_d x_d)^2 contributing 2 c w alpha alpha^T
struct Combo {
  int idx[6];
  double alpha[6];
  int count = 0;
  void add(int i, double a) {
    idx[count] = i;
    alpha[count] = a;
    ++count;
  }
};

void scatter(std::vector<Eigen::Triplet<double>>& trips, const Combo& c, double coeff) {
  for (int i = 0; i < c.count; ++i)
    for (int j = 0; j < c.count; ++j)
      trips.emplace_back(c.idx[i], c.idx[j], coeff * c.alpha[i] * c.alpha[j]);
}

}  // namespace

OperatorPair assemble_operators(const Equilibrium& eq, ModeIndex mode, int n_vac) {
  OperatorPair op;
  op.n = eq.grid.n();
  op.mode = mode;
  const int n = op.n;
  const int ndof = op.dofs();
  const double m = mode.m, k = mode.k;
  const double m2 = m * m;

  if (mode.m != 0) {
    op.vac = std::make_shared<VacuumResponse>(vacuum_response(eq, mode, n_vac));
    op.vac_c = op.vac->c;
  }

  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(32 * n);
  mt.reserve(12 * n);
  const auto& rule = gauss_rule(kQuad);

  for (int e = 0; e < n; ++e) {
    const double a = eq.grid.left(e), b = eq.grid.right(e), h = b - a;
    const int xiL = e - 1, xiR = e;  // xiL = -1 drops the hard-wired xi(0) = 0
    for (Eigen::Index g = 0; g < rule.x.size(); ++g) {
      const double r = 0.5 * (a + b) + 0.5 * h * rule.x[g];
      const double w = 0.5 * h * rule.w[g] * kTwoPiSq;
      if (r <= 0.0) throw QuadratureBlowup("assembly quadrature point at r <= 0");
      const double t = (r - a) / h;
      const double p = eq.p_at(r), dp = eq.dp_at(r);
      const double B2 = eq.B2_at(r), B = std::sqrt(B2);
      const double rho = eq.rho_at(r);

      // xi and xi' as linear functionals of the local dofs
      const double NL = 1.0 - t, NR = t;
      const double DL = -1.0 / h, DR = 1.0 / h;

      auto xi_combo = [&](double cv, double cd) {  // cv*xi + cd*xi'
        Combo c;
        if (xiL >= 0)
          c.add(xiL, cv * NL + cd * DL);
        else if (op.has_axis_dof())
          c.add(op.xi_axis_dof(), cv * NL + cd * DL);
        c.add(xiR, cv * NR + cd * DR);
        return c;
      };
      // eta/zeta: piecewise linear between nodes, constant on element 0
      auto add_aux = [&](Combo& c, int base, double cv) {
        if (e == 0) {
          c.add(base, cv);
        } else {
          c.add(base + e - 1, cv * NL);
          c.add(base + e, cv * NR);
        }
      };

      if (mode.m == 0) {
        const double gpB = eq.gamma * p + B2;
        const double ratio = (gpB > 0.0) ? B2 / gpB : 0.0;
        const double A0 =
            2.0 * dp / r + ((gpB > 0.0) ? 4.0 * eq.gamma * p * B2 / (r * r * gpB) : 0.0);

        scatter(kt, xi_combo(1.0, 0.0), 2.0 * w * A0 * r);

        Combo comp = xi_combo(-1.0 / r + 2.0 * ratio / r, -1.0);
        add_aux(comp, n, k);
        scatter(kt, comp, 2.0 * w * gpB * r);
      } else {
        const double mk2 = m2 + k * k * r * r;

        Combo bend = xi_combo(B * k / mk2, -B * k * r / mk2);
        add_aux(bend, n, B / r);
        scatter(kt, bend, 2.0 * w * mk2 * r);

        Combo divg = xi_combo(1.0 / r, 1.0);
        add_aux(divg, n, -k);
        add_aux(divg, 2 * n, m / r);
        scatter(kt, divg, 2.0 * w * eq.gamma * p * r);

        // the last two integrals carry a plain dr measure
        scatter(kt, xi_combo(1.0, -r), 2.0 * w * m2 * B2 / (r * mk2));
        scatter(kt, xi_combo(1.0, 0.0), 2.0 * w * (2.0 * dp + m2 * B2 / r));
      }

      scatter(mt, xi_combo(1.0, 0.0), 2.0 * w * rho * r);
      {
        Combo ce;
        add_aux(ce, n, 1.0);
        scatter(mt, ce, 2.0 * w * rho * r);
        if (mode.m != 0) {
          Combo cz;
          add_aux(cz, 2 * n, 1.0);
          scatter(mt, cz, 2.0 * w * rho * r);
        }
      }
    }
  }

  if (mode.m != 0) kt.emplace_back(n - 1, n - 1, 2.0 * op.vac_c);

  op.K.resize(ndof, ndof);
  op.M.resize(ndof, ndof);
  op.K.setFromTriplets(kt.begin(), kt.end());
  op.M.setFromTriplets(mt.begin(), mt.end());
  return op;
}

TrialField OperatorPair::unpack(const Equilibrium& eq, const Eigen::VectorXd& x) const {
  TrialField f;
  f.r = eq.grid.r;
  f.xi = x.head(n).array();
  f.eta = x.segment(n, n).array();
  if (mode.m != 0) {
    f.zeta = x.segment(2 * n, n).array();
    const double scale = mode.m * eq.Bhat_at(eq.r0) * f.xi_boundary() / eq.r0;
    f.vac_r = vac->r;
    f.qr = scale * vac->qr;
  }
  if (has_axis_dof()) f.xi_axis = x[xi_axis_dof()];
  return f;
}

Eigen::VectorXd OperatorPair::pack(const TrialField& f) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dofs());
  x.head(n) = f.xi.matrix();
  x.segment(n, n) = f.eta.matrix();
  if (mode.m != 0) x.segment(2 * n, n) = f.zeta.matrix();
  if (has_axis_dof()) x[xi_axis_dof()] = f.xi_axis;
  return x;
}

}  // namespace zpinch
