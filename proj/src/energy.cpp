#include "zpinch/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zpinch/errors.hpp"
#include "zpinch/quadrature.hpp"
#include "zpinch/vacuum.hpp"

namespace zpinch {

namespace {

constexpr double kTwoPiSq = 2.0 * M_PI * M_PI;
constexpr int kQuad = 8;

struct PointData {
  double r, p, dp, B2, B, rho, Jz;
  double dBr;  // (B/r)'
};

PointData point_data(const Equilibrium& eq, double r) {
  if (r <= 0.0) throw QuadratureBlowup("quadrature point at r <= 0");
  PointData d;
  d.r = r;
  d.p = eq.p_at(r);
  d.dp = eq.dp_at(r);
  d.B2 = eq.B2_at(r);
  d.B = std::sqrt(d.B2);
  d.rho = eq.rho_at(r);
  d.Jz = eq.Jz_at(r);
  d.dBr = d.Jz / r - 2.0 * d.B / (r * r);
  return d;
}

struct FieldSample {
  double xi, dxi, eta, zeta;
};

FieldSample sample(const TrialField& f, int e, double r) {
  FieldSample s;
  const double a = (e == 0) ? 0.0 : f.r[e - 1];
  const double b = f.r[e];
  const double xl = f.left_value(e);
  const double t = (r - a) / (b - a);
  s.xi = (1.0 - t) * xl + t * f.xi[e];
  s.dxi = (f.xi[e] - xl) / (b - a);
  if (e == 0) {
    // eta/zeta are constant on the innermost element (free axis values)
    s.eta = f.eta[0];
    s.zeta = f.zeta.size() ? f.zeta[0] : 0.0;
  } else {
    s.eta = (1.0 - t) * f.eta[e - 1] + t * f.eta[e];
    s.zeta = f.zeta.size() ? (1.0 - t) * f.zeta[e - 1] + t * f.zeta[e] : 0.0;
  }
  return s;
}

// accumulates all the quadratic forms for one mode in a single sweep
struct EnergyTotals {
  double fluid_a = 0.0;   // reduced form
  double fluid_b = 0.0;   // decomposed (beta_0) form, before its boundary term
  double constraint = 0.0;
};

void accumulate_m0(const Equilibrium& eq, ModeIndex mode, const TrialField& f, EnergyTotals& tot) {
  const auto& rule = gauss_rule(kQuad);
  const double k = mode.k;
  for (int e = 0; e < f.n(); ++e) {
    const double a = (e == 0) ? 0.0 : f.r[e - 1];
    const double b = f.r[e];
    const double h2 = 0.5 * (b - a);
    for (Eigen::Index g = 0; g < rule.x.size(); ++g) {
      const double r = 0.5 * (a + b) + h2 * rule.x[g];
      const double w = h2 * rule.w[g];
      const auto d = point_data(eq, r);
      const auto s = sample(f, e, r);
      const double gpB = eq.gamma * d.p + d.B2;
      const double ratio = (gpB > 0.0) ? d.B2 / gpB : 0.0;

      // reduced form: A0 xi^2 r + (gp + B^2) [k eta - ((r xi)'/r - 2 B^2 xi/((gp+B^2) r))]^2 r
      const double A0 = 2.0 * d.dp / r + ((gpB > 0.0) ? 4.0 * eq.gamma * d.p * d.B2 / (r * r * gpB) : 0.0);
      const double compress = k * s.eta - (s.dxi + s.xi / r) + 2.0 * ratio * s.xi / r;
      tot.fluid_a += w * (A0 * s.xi * s.xi + gpB * compress * compress) * r;

      // raw form: 2 p' xi^2 + B^2 [k eta - xi' + xi/r]^2 r + gp [xi' + xi/r - k eta]^2 r
      const double magn = k * s.eta - s.dxi + s.xi / r;
      const double divg = s.dxi + s.xi / r - k * s.eta;
      tot.fluid_b += w * (2.0 * d.dp * s.xi * s.xi + (d.B2 * magn * magn + eq.gamma * d.p * divg * divg) * r);

      tot.constraint += w * d.rho * (s.xi * s.xi + s.eta * s.eta) * r;
    }
  }
}

void accumulate_m(const Equilibrium& eq, ModeIndex mode, const TrialField& f, EnergyTotals& tot) {
  const auto& rule = gauss_rule(kQuad);
  const double m = mode.m, k = mode.k;
  const double m2 = m * m;
  for (int e = 0; e < f.n(); ++e) {
    const double a = (e == 0) ? 0.0 : f.r[e - 1];
    const double b = f.r[e];
    const double h2 = 0.5 * (b - a);
    for (Eigen::Index g = 0; g < rule.x.size(); ++g) {
      const double r = 0.5 * (a + b) + h2 * rule.x[g];
      const double w = h2 * rule.w[g];
      const auto d = point_data(eq, r);
      const auto s = sample(f, e, r);
      const double mk2 = m2 + k * k * r * r;
      const double rxi_p = s.xi + r * s.dxi;  // (r xi)'

      // shared terms of both forms
      const double bend = d.B * (s.eta / r + k * (s.xi - r * s.dxi) / mk2);
      const double divg = s.dxi + s.xi / r - k * s.eta + m * s.zeta / r;
      const double shared = (mk2 * bend * bend + eq.gamma * d.p * divg * divg) * r;

      // reduced form extras
      const double curv = s.xi - r * s.dxi;
      tot.fluid_a += w * (shared + m2 * d.B2 / (r * mk2) * curv * curv +
                          (2.0 * d.dp + m2 * d.B2 / r) * s.xi * s.xi);

      // decomposed form extras
      const double beta0 =
          (m2 * d.B2 / (r * r * r) + 2.0 * m2 * d.B * d.dBr / (r * mk2) -
           4.0 * k * k * m2 * d.B2 / (r * mk2 * mk2) + 2.0 * k * k * d.dp / mk2) /
          r;
      tot.fluid_b += w * (shared + (m2 * d.B2 / (r * r * mk2)) * rxi_p * rxi_p * r +
                          beta0 * (r * s.xi) * (r * s.xi) * r);

      tot.constraint += w * d.rho * (s.xi * s.xi + s.eta * s.eta + s.zeta * s.zeta) * r;
    }
  }
}

}  // namespace

EnergyBreakdown assemble_energy(const Equilibrium& eq, ModeIndex mode, const TrialField& f) {
  EnergyTotals tot;
  EnergyBreakdown out;
  const double xi_b = f.xi_boundary();
  const double Bb2 = eq.Btheta[eq.grid.n() - 1] * eq.Btheta[eq.grid.n() - 1];
  const double Bhat2 = eq.Bhat_at(eq.r0) * eq.Bhat_at(eq.r0);
  out.surface = -kTwoPiSq * (Bhat2 - Bb2) * xi_b * xi_b;

  if (mode.m == 0) {
    accumulate_m0(eq, mode, f, tot);
    out.fluid = kTwoPiSq * tot.fluid_a;
    out.fluid_alt = kTwoPiSq * tot.fluid_b;
    out.vacuum = 0.0;
  } else {
    if (!f.qr.size() || f.qr.size() != f.vac_r.size())
      throw ConstraintViolation("m != 0 field needs a vacuum Qr profile");
    const double lhs = mode.m * eq.Bhat_at(eq.r0) * xi_b;
    const double rhs = eq.r0 * f.qr[0];
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    if (std::abs(lhs - rhs) > 1e-8 * scale)
      throw ConstraintViolation("interface coupling m Bhat xi(r0) = r0 Qr(r0) violated");
    const double q_scale = std::max(f.qr.abs().maxCoeff(), 1e-300);
    if (std::abs(f.qr[f.qr.size() - 1]) > 1e-10 * q_scale)
      throw ConstraintViolation("wall condition Qr(rw) = 0 violated");

    accumulate_m(eq, mode, f, tot);
    const double mk2_b = double(mode.m) * mode.m + double(mode.k) * mode.k * eq.r0 * eq.r0;
    const double bterm = kTwoPiSq * 2.0 * mode.m * mode.m * Bb2 * xi_b * xi_b / mk2_b;
    out.fluid = kTwoPiSq * tot.fluid_a;
    out.fluid_alt = kTwoPiSq * tot.fluid_b - bterm;
    out.vacuum = vacuum_energy(mode, f.vac_r, f.qr);
  }
  out.constraint = kTwoPiSq * tot.constraint;
  out.total = out.fluid + out.surface + out.vacuum;
  out.total_alt = out.fluid_alt + out.surface + out.vacuum;
  return out;
}

EnergyBreakdown assemble_E0k(const Equilibrium& eq, ModeIndex mode, const TrialField& f) {
  if (mode.m != 0) throw ConfigError("assemble_E0k needs m = 0");
  return assemble_energy(eq, mode, f);
}

EnergyBreakdown assemble_Emk(const Equilibrium& eq, ModeIndex mode, const TrialField& f) {
  if (mode.m == 0) throw ConfigError("assemble_Emk needs m != 0");
  return assemble_energy(eq, mode, f);
}

double assemble_J(const Equilibrium& eq, const TrialField& f) {
  const auto& rule = gauss_rule(kQuad);
  double acc = 0.0;
  for (int e = 0; e < f.n(); ++e) {
    const double a = (e == 0) ? 0.0 : f.r[e - 1];
    const double b = f.r[e];
    const double h2 = 0.5 * (b - a);
    for (Eigen::Index g = 0; g < rule.x.size(); ++g) {
      const double r = 0.5 * (a + b) + h2 * rule.x[g];
      const double w = h2 * rule.w[g];
      const auto s = sample(f, e, r);
      acc += w * eq.rho_at(r) * (s.xi * s.xi + s.eta * s.eta + s.zeta * s.zeta) * r;
    }
  }
  return kTwoPiSq * acc;
}

WeightedNorms weighted_norms(const Equilibrium& eq, ModeIndex mode, const TrialField& f,
                             double s1) {
  const auto& rule = gauss_rule(kQuad);
  WeightedNorms out;
  double space = 0.0, compact = 0.0;
  const double m = mode.m, k = mode.k;
  for (int e = 0; e < f.n(); ++e) {
    const double a = (e == 0) ? 0.0 : f.r[e - 1];
    const double b = f.r[e];
    // split the element at s1 so the compact norm switches weight exactly there
    const double splits[2][2] = {{a, std::clamp(s1, a, b)}, {std::clamp(s1, a, b), b}};
    for (int part = 0; part < 2; ++part) {
      const double pa = splits[part][0], pb = splits[part][1];
      if (pb - pa <= 0.0) continue;
      const double h2 = 0.5 * (pb - pa);
      for (Eigen::Index g = 0; g < rule.x.size(); ++g) {
        const double r = 0.5 * (pa + pb) + h2 * rule.x[g];
        const double w = h2 * rule.w[g];
        const auto d = point_data(eq, r);
        const auto s = sample(f, e, r);
        const double rxi_p_r = s.dxi + s.xi / r;  // (r xi)'/r
        if (mode.m == 0) {
          const double magn = k * s.eta - s.dxi + s.xi / r;
          space += w * (d.p * rxi_p_r * rxi_p_r + d.B2 * magn * magn) * r +
                   w * d.rho * (s.xi * s.xi + s.eta * s.eta) * r;
          compact += w * ((r < s1) ? s.xi * s.xi : -d.dp * s.xi * s.xi);
        } else {
          const double mk2 = m * m + k * k * r * r;
          const double comp = rxi_p_r + m * s.zeta / r;
          const double bend = s.eta / r - k * (s.xi + r * s.dxi - 2.0 * s.xi) / mk2;
          const double curv = s.xi - r * s.dxi;
          space += w * (d.p * comp * comp * r + d.B2 * s.xi * s.xi / r +
                        d.B2 * bend * bend * r + d.B2 * curv * curv / r +
                        d.rho * (s.xi * s.xi + s.eta * s.eta + s.zeta * s.zeta) * r);
          compact += w * ((r < s1) ? d.B2 * s.xi * s.xi : -d.dp * s.xi * s.xi);
        }
      }
    }
  }
  out.space_norm = std::sqrt(std::max(space, 0.0));
  out.compact_norm = std::sqrt(std::max(compact, 0.0));
  return out;
}

double weight_ratio_sup(const Equilibrium& eq, double r) {
  // sample p/(-p') at nodes and element interiors of [r, r0]
  double sup = 0.0;
  const int samples = 512;
  for (int i = 0; i <= samples; ++i) {
    const double s = r + (eq.r0 - r) * double(i) / samples;
    const double pv = eq.p_at(s), dpv = eq.dp_at(s);
    if (pv <= 0.0) continue;
    if (dpv >= 0.0) return std::numeric_limits<double>::infinity();
    sup = std::max(sup, pv / (-dpv));
  }
  return sup;
}

WeightEstimate weight_dp_estimate(const Equilibrium& eq, const TrialField& f, double s1) {
  const auto& rule = gauss_rule(kQuad);
  WeightEstimate est;
  est.g = weight_ratio_sup(eq, s1);
  double lhs = 0.0, grad = 0.0;
  for (int e = 0; e < f.n(); ++e) {
    const double a = (e == 0) ? 0.0 : f.r[e - 1];
    const double b = f.r[e];
    const double pa = std::max(a, s1);
    if (b <= pa) continue;
    const double h2 = 0.5 * (b - pa);
    for (Eigen::Index g = 0; g < rule.x.size(); ++g) {
      const double r = 0.5 * (pa + b) + h2 * rule.x[g];
      const double w = h2 * rule.w[g];
      const auto s = sample(f, e, r);
      lhs += w * (-eq.dp_at(r)) * s.xi * s.xi;
      grad += w * eq.p_at(r) * s.dxi * s.dxi;
    }
  }
  // xi(s1) on the trial field
  int e1 = 0;
  while (e1 + 1 < f.n() && f.r[e1] < s1) ++e1;
  const double xi_s1 = sample(f, e1, s1).xi;
  est.lhs = lhs;
  est.rhs = 2.0 * eq.p_at(s1) * xi_s1 * xi_s1 + 4.0 * est.g * grad;
  return est;
}

CoercivityTerms coercivity_terms(const Equilibrium& eq, ModeIndex mode, const TrialField& f) {
  const auto& rule = gauss_rule(kQuad);
  CoercivityTerms out;
  const auto norms = weighted_norms(eq, mode, f, 0.9 * eq.r0);
  out.space_norm_sq = norms.space_norm * norms.space_norm;
  out.constraint = assemble_J(eq, f);
  double corr = 0.0;
  for (int e = 0; e < f.n(); ++e) {
    const double a = (e == 0) ? 0.0 : f.r[e - 1];
    const double b = f.r[e];
    const double h2 = 0.5 * (b - a);
    for (Eigen::Index g = 0; g < rule.x.size(); ++g) {
      const double r = 0.5 * (a + b) + h2 * rule.x[g];
      const double w = h2 * rule.w[g];
      const auto s = sample(f, e, r);
      corr += w * (2.0 * eq.dp_at(r) * s.xi * s.xi +
                   eq.gamma * eq.p_at(r) * double(mode.k) * mode.k * s.eta * s.eta * r);
    }
  }
  out.correction = corr;
  return out;
}

}  // namespace zpinch
