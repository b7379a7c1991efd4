#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "zpinch/equilibrium.hpp"
#include "zpinch/numerics.hpp"
#include "zpinch/errors.hpp"

using namespace zpinch;

namespace {

GridSpec spec_n(int n, Clustering c = Clustering::TwoSided) {
  GridSpec s;
  s.n = n;
  s.clustering = c;
  return s;
}

// p built by integrating p' = -Jz * Btheta for a prescribed current profile
PressureProfile profile_from_current(const std::function<double(double)>& Jz, double gamma,
                                     int n_samples = 4096) {
  const double r0 = 1.0;
  Eigen::ArrayXd r = Eigen::ArrayXd::LinSpaced(n_samples + 1, 0.0, r0);
  // Btheta = (1/r) int_0^r s Jz ds by the trapezoid rule on a fine grid
  Eigen::ArrayXd sJ(n_samples + 1), cum(n_samples + 1), Bth(n_samples + 1);
  for (int i = 0; i <= n_samples; ++i) sJ[i] = r[i] * Jz(r[i]);
  cum[0] = 0.0;
  for (int i = 1; i <= n_samples; ++i)
    cum[i] = cum[i - 1] + 0.5 * (sJ[i] + sJ[i - 1]) * (r[i] - r[i - 1]);
  Bth[0] = 0.0;
  for (int i = 1; i <= n_samples; ++i) Bth[i] = cum[i] / r[i];
  // p(r) = int_r^r0 Jz Btheta ds
  Eigen::ArrayXd integ(n_samples + 1), p(n_samples + 1);
  for (int i = 0; i <= n_samples; ++i) integ[i] = Jz(r[i]) * Bth[i];
  p[n_samples] = 0.0;
  for (int i = n_samples - 1; i >= 0; --i)
    p[i] = p[i + 1] + 0.5 * (integ[i] + integ[i + 1]) * (r[i + 1] - r[i]);
  return PressureProfile::tabulated(r, p, gamma);
}

}  // namespace

TEST_CASE("uniform current oracle: B_theta = r, p = 1 - r^2") {
  auto prof = PressureProfile::uniform_current(2.0, 5.0 / 3.0);
  auto eq = build_equilibrium(prof, spec_n(512));
  for (int i = 0; i < eq.grid.n(); ++i) {
    const double r = eq.grid.r[i];
    CHECK(std::abs(eq.Btheta[i] - r) < 1e-10);
    CHECK(std::abs(eq.p[i] - (1.0 - r * r)) < 1e-10);
    CHECK(std::abs(eq.Jz[i] - 2.0) < 1e-8);
  }
  CHECK(eq.bhat_coeff == doctest::Approx(1.0).epsilon(1e-12));
  // rho = (p/A)^(1/gamma)
  const double r = 0.5;
  CHECK(eq.rho_at(r) == doctest::Approx(std::pow(0.75, 0.6)).epsilon(1e-12));
}

TEST_CASE("zero profile gives the trivial equilibrium") {
  auto prof = PressureProfile::power_law(0.0, 2.0, 5.0 / 3.0);
  prof.relaxed = true;
  auto eq = build_equilibrium(prof, spec_n(64), false);
  CHECK(eq.Btheta.abs().maxCoeff() == 0.0);
  CHECK(eq.Jz.abs().maxCoeff() == 0.0);
  CHECK(eq.rho.abs().maxCoeff() == 0.0);
}

TEST_CASE("force balance residual is small and shrinks under refinement") {
  const std::vector<PressureProfile> profiles = {
      PressureProfile::uniform_current(2.0, 5.0 / 3.0),
      PressureProfile::power_law(1.0, 2.0, 5.0 / 3.0),
      PressureProfile::power_law(0.7, 3.0, 2.0),
      PressureProfile::exponential(1.0, 1.0, 5.0 / 3.0),
  };
  for (const auto& prof : profiles) {
    for (int n : {256, 512, 1024}) {
      auto eq = build_equilibrium(prof, spec_n(n));
      const auto res = force_balance_residual(eq);
      CHECK(res.abs().maxCoeff() < 1e-8);
    }
  }
  // On the polynomial families the residual sits at the roundoff floor at
  // any n; the exponential profile still has visible truncation at n = 128,
  // so the high-order decay per doubling shows up there.
  Eigen::ArrayXd errs(3);
  int idx = 0;
  for (int n : {128, 256, 512}) {
    auto eq = build_equilibrium(profiles[3], spec_n(n));
    errs[idx++] = force_balance_residual(eq).abs().maxCoeff();
  }
  CHECK(errs[1] < errs[0] / 30.0);
  CHECK(errs[2] < errs[1] / 30.0);
}

TEST_CASE("B_theta / r is bounded by |Jz|_inf / 2") {
  for (auto prof : {PressureProfile::power_law(1.0, 2.0, 5.0 / 3.0),
                    PressureProfile::exponential(1.0, 1.0, 5.0 / 3.0)}) {
    auto eq = build_equilibrium(prof, spec_n(256));
    const double jmax = std::max(eq.Jz.abs().maxCoeff(), std::abs(eq.Jz_at(0.0)));
    for (int i = 0; i < eq.grid.n(); ++i)
      CHECK(eq.Btheta[i] / eq.grid.r[i] <= 0.5 * jmax * (1.0 + 1e-8));
  }
}

TEST_CASE("axis expansion: constant current") {
  auto eq = build_equilibrium(PressureProfile::uniform_current(2.0, 5.0 / 3.0), spec_n(512));
  const auto ax = taylor_axis_coefficients(eq);
  CHECK(ax.B_lin == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(ax.B_quad) < 1e-6);
  CHECK(ax.dp_lin == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(std::abs(ax.dp_quad) < 1e-5);
}

TEST_CASE("axis expansion: Jz = 2 - r") {
  // integrating the equilibrium ODEs for Jz = 2 - r gives the quartic
  // p = 19/36 - r^2 + (5/9) r^3 - r^4/12, sampled exactly
  Eigen::ArrayXd r = Eigen::ArrayXd::LinSpaced(4097, 0.0, 1.0);
  Eigen::ArrayXd p =
      19.0 / 36.0 - r * r + (5.0 / 9.0) * r.pow(3) - r.pow(4) / 12.0;
  auto prof = PressureProfile::tabulated(r, p, 5.0 / 3.0);
  auto eq = build_equilibrium(prof, spec_n(1024), false);
  const auto ax = taylor_axis_coefficients(eq);
  CHECK(ax.Jz0 == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(ax.dJz0 == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(ax.B_quad == doctest::Approx(-1.0 / 3.0).epsilon(1e-4));
  CHECK(ax.dp_quad == doctest::Approx(5.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("axis expansion rejects a current that is singular on the axis") {
  // global (r0 - r)^beta pressure has p'(0) != 0, so Jz ~ r^(-1/2)
  Eigen::ArrayXd r = Eigen::ArrayXd::LinSpaced(2049, 0.0, 1.0);
  Eigen::ArrayXd p = (1.0 - r).pow(2.0);
  auto prof = PressureProfile::tabulated(r, p, 5.0 / 3.0);
  prof.relaxed = true;
  auto eq = build_equilibrium(prof, spec_n(512), false);
  CHECK_THROWS_AS((void)taylor_axis_coefficients(eq), AxisSingularity);
}

TEST_CASE("sausage criterion: uniform current value and witness") {
  auto eq = build_equilibrium(PressureProfile::uniform_current(2.0, 5.0 / 3.0), spec_n(256));
  const auto rep = sausage_criterion_scan(eq);
  CHECK(rep.verdict == Verdict::UnstableWitnessFound);
  REQUIRE(rep.witness_r.has_value());
  CHECK(*rep.witness_r > 0.0);
  CHECK(*rep.witness_r < 1.0);
  // value at r = 0.9 is about -1.29
  int idx = 0;
  (rep.r - 0.9).abs().minCoeff(&idx);
  const double r = rep.r[idx];
  const double p = 1.0 - r * r, b2 = r * r, g = 5.0 / 3.0;
  const double expect = -2.0 * r + 2.0 * g * p * b2 / (r * (g * p + b2));
  CHECK(rep.value[idx] == doctest::Approx(expect).epsilon(1e-8));
  CHECK(expect == doctest::Approx(-1.29).epsilon(0.01));
}

TEST_CASE("sausage criterion: zero profile is inconclusive") {
  auto prof = PressureProfile::power_law(0.0, 2.0, 5.0 / 3.0);
  prof.relaxed = true;
  auto eq = build_equilibrium(prof, spec_n(64), false);
  const auto rep = sausage_criterion_scan(eq);
  CHECK(rep.verdict == Verdict::Inconclusive);
  CHECK(!rep.witness_r.has_value());
}

TEST_CASE("sausage criterion finds the mean-value-theorem witness radius") {
  // q(r) = r^(2 gamma) p(r) vanishes at both ends, so q' = 0 somewhere and
  // the criterion is strictly negative there
  auto eq = build_equilibrium(PressureProfile::power_law(1.0, 2.0, 1.4), spec_n(512));
  const auto rep = sausage_criterion_scan(eq);
  REQUIRE(rep.witness_r.has_value());
  const double rs = *rep.witness_r;
  const double p = eq.p_at(rs), b2 = eq.B2_at(rs), g = eq.gamma;
  CHECK(eq.dp_at(rs) + 2.0 * g * p * b2 / (rs * (g * p + b2)) < 0.0);
}

TEST_CASE("interchange criterion: uniform current sign pattern") {
  auto eq = build_equilibrium(PressureProfile::uniform_current(2.0, 5.0 / 3.0), spec_n(256));
  // 2p' + m^2 B^2 / r = r (m^2 - 4)
  auto rep1 = interchange_criterion_scan(eq, 1);
  CHECK(rep1.verdict == Verdict::UnstableWitnessFound);
  CHECK((rep1.value < 0.0).all());
  auto rep2 = interchange_criterion_scan(eq, 2);
  CHECK(rep2.verdict == Verdict::Inconclusive);
  CHECK(rep2.value.abs().maxCoeff() < 1e-12);
  auto rep3 = interchange_criterion_scan(eq, 3);
  CHECK(rep3.verdict == Verdict::CriterionNonnegative);
  CHECK((rep3.value > 0.0).all());
  for (Eigen::Index i = 0; i < rep3.r.size(); ++i)
    CHECK(rep3.value[i] == doctest::Approx(5.0 * rep3.r[i]).epsilon(1e-10));
}

TEST_CASE("interchange criterion: nonincreasing current is stable for |m| >= 2") {
  auto prof = profile_from_current([](double r) { return 2.0 / (1.0 + r * r); }, 5.0 / 3.0);
  auto eq = build_equilibrium(prof, spec_n(256), false);
  for (int m : {2, -2, 3}) {
    auto rep = interchange_criterion_scan(eq, m);
    CHECK(rep.verdict != Verdict::UnstableWitnessFound);
    CHECK(rep.value.minCoeff() > -1e-10);
  }
}

TEST_CASE("interchange criterion: compactly supported current is unstable for every m") {
  // smooth bump current supported on (0.2, 0.6)
  auto bump = [](double r) {
    const double s = (r - 0.4) / 0.2;
    return (std::abs(s) < 1.0) ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
  };
  auto prof = profile_from_current(bump, 5.0 / 3.0, 8192);
  prof.relaxed = true;  // p vanishes on [0.6, 1], outside the admissible class
  auto eq = build_equilibrium(prof, spec_n(512), false);
  for (int m : {1, 2, 3}) {
    auto rep = interchange_criterion_scan(eq, m);
    CHECK(rep.verdict == Verdict::UnstableWitnessFound);
  }
}

TEST_CASE("admissibility reports") {
  SUBCASE("power law is admissible; bounded iff gamma >= beta/(beta-1)") {
    auto p1 = PressureProfile::power_law(1.0, 2.0, 3.0);
    auto eq1 = build_equilibrium(p1, spec_n(256));
    auto rep1 = check_admissibility(p1, eq1);
    CHECK(rep1.admissible);
    CHECK(rep1.measured_beta == doctest::Approx(2.0).epsilon(0.02));
    CHECK(rep1.dp_over_rho_bounded);  // gamma = 3 >= 2

    auto p2 = PressureProfile::power_law(1.0, 2.0, 1.5);
    auto eq2 = build_equilibrium(p2, spec_n(256));
    auto rep2 = check_admissibility(p2, eq2);
    CHECK(rep2.admissible);
    CHECK(!rep2.dp_over_rho_bounded);  // gamma = 1.5 < 2
  }
  SUBCASE("exponential profile is admissible with bounded |p'|/rho for gamma > 1") {
    auto p = PressureProfile::exponential(1.0, 1.0, 1.2);
    auto eq = build_equilibrium(p, spec_n(256));
    auto rep = check_admissibility(p, eq);
    CHECK(rep.admissible);
    CHECK(rep.dp_over_rho_bounded);
  }
  SUBCASE("p/p' limit matches -(r0 - r)/beta for the power family") {
    auto p = PressureProfile::power_law(2.0, 3.0, 2.0);
    auto eq = build_equilibrium(p, spec_n(256));
    auto rep = check_admissibility(p, eq);
    CHECK(rep.ratio_limit_zero);
    const double d = 0.1 / 4096.0;  // closest approach distance
    CHECK(rep.last_p_over_dp == doctest::Approx(-d / 3.0).epsilon(0.01));
  }
}

TEST_CASE("increasing pressure violates the field-existence condition") {
  Eigen::ArrayXd r = Eigen::ArrayXd::LinSpaced(257, 0.0, 1.0);
  Eigen::ArrayXd p = 0.1 + r * r * (1.0 - r) * (1.0 - r);
  auto prof = PressureProfile::tabulated(r, p, 5.0 / 3.0);
  prof.relaxed = true;
  CHECK_THROWS_AS((void)build_equilibrium(prof, spec_n(64), false), NonpositiveIntegrand);
}

TEST_CASE("strict mode rejects inadmissible profiles") {
  // plateau pressure: vanishes before r0
  Eigen::ArrayXd r = Eigen::ArrayXd::LinSpaced(257, 0.0, 1.0);
  Eigen::ArrayXd p(257);
  for (int i = 0; i < 257; ++i) p[i] = std::max(0.0, 0.36 - r[i] * r[i]);
  auto prof = PressureProfile::tabulated(r, p, 5.0 / 3.0);
  CHECK_THROWS_AS((void)build_equilibrium(prof, spec_n(64), true), AdmissibilityViolation);
  prof.relaxed = true;
  CHECK_NOTHROW((void)build_equilibrium(prof, spec_n(64), true));
}

TEST_CASE("grid spec honors the outer-share clustering contract") {
  GridSpec s = spec_n(300);
  auto g = make_grid(s, 1.0);
  int outer = 0;
  for (int i = 0; i < g.n(); ++i)
    if (g.r[i] > 0.9) ++outer;
  CHECK(outer >= 99);
  CHECK(g.r[g.n() - 1] == 1.0);
  for (int i = 1; i < g.n(); ++i) CHECK(g.r[i] > g.r[i - 1]);
  CHECK_THROWS_AS((void)make_grid(GridSpec{.n = 8}, 1.0), ConfigError);
}
