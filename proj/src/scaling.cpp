#include "zpinch/scaling.hpp"

#include <cmath>

#include "zpinch/errors.hpp"
#include "zpinch/numerics.hpp"
#include "zpinch/quadrature.hpp"

namespace zpinch {

double BumpFunction::operator()(double s) const {
  const double u = 2.0 * s + 1.0;
  const double q = 1.0 - u * u;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

double BumpFunction::d(double s) const {
  const double u = 2.0 * s + 1.0;
  const double q = 1.0 - u * u;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q) * (-4.0 * u / (q * q));
}

namespace {

constexpr double kTwoPiSq = 2.0 * M_PI * M_PI;

struct FamilyPoint {
  double xi, dxi, eta;
};

// analytic xi_k, xi_k' and the annihilating eta_k at radius r
FamilyPoint family_at(const Equilibrium& eq, const BumpFunction& w, double alpha, int k,
                      double r) {
  const double ka = std::pow(double(k), alpha);
  FamilyPoint f;
  const double s = ka * (r - eq.r0);
  f.xi = w(s);
  f.dxi = ka * w.d(s);
  const double p = eq.p_at(r);
  const double B2 = eq.B2_at(r);
  const double gpB = eq.gamma * p + B2;
  const double ratio = (gpB > 0.0) ? B2 / gpB : 0.0;
  // (r xi)' - 2 B^2 xi / (gp + B^2), divided by k r
  f.eta = (f.xi + r * f.dxi - 2.0 * ratio * f.xi) / (double(k) * r);
  return f;
}

}  // namespace

TrialField build_test_family(const Equilibrium& eq, double alpha, const BumpFunction& w, int k,
                             int n_local) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (k < 1) throw ConfigError("test family needs k >= 1");
  const double width = std::pow(double(k), -alpha);
  if (width >= eq.r0)
    throw SupportOverflow("scaled bump support escapes (0, r0); increase k or alpha");

  TrialField f;
  const int n = std::max(n_local, 64);
  f.r.resize(n);
  f.xi.resize(n);
  f.eta.resize(n);
  // local grid: a few nodes below the support, the rest resolving it
  const double lo = eq.r0 - width;
  for (int i = 0; i < n; ++i) {
    const double t = double(i + 1) / n;
    f.r[i] = (t < 0.1) ? lo * (t / 0.1) : lo + (eq.r0 - lo) * (t - 0.1) / 0.9;
  }
  f.r[n - 1] = eq.r0;
  for (int i = 0; i < n; ++i) {
    const auto fi = family_at(eq, w, alpha, k, f.r[i]);
    f.xi[i] = fi.xi;
    f.eta[i] = fi.eta;
  }
  return f;
}

ScalingStudy fit_scaling_exponent(const Equilibrium& eq, double alpha, const BumpFunction& w,
                                  const std::vector<int>& k_list) {
  ScalingStudy st;
  st.alpha = alpha;
  const double beta = eq.profile.beta;
  st.expected_exponent = alpha * beta / eq.gamma - alpha * (beta - 1.0);

  const auto& rule = gauss_rule(8);
  const int panels = 96;

  for (int k : k_list) {
    const double width = std::pow(double(k), -alpha);
    if (width >= eq.r0)
      throw SupportOverflow("scaled bump support escapes (0, r0) at k = " + std::to_string(k));
    const double lo = eq.r0 - width;

    double Jv = 0.0, Ev = 0.0;
    const double h = width / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * h, b = a + h;
      Jv += gauss_panel(
          [&](double r) {
            const auto f = family_at(eq, w, alpha, k, r);
            return eq.rho_at(r) * (f.xi * f.xi + f.eta * f.eta) * r;
          },
          a, b, rule);
      Ev += gauss_panel(
          [&](double r) {
            const auto f = family_at(eq, w, alpha, k, r);
            const double p_ = eq.p_at(r), dp_ = eq.dp_at(r);
            const double B2 = eq.B2_at(r);
            const double gpB = eq.gamma * p_ + B2;
            const double A0 =
                2.0 * dp_ / r + ((gpB > 0.0) ? 4.0 * eq.gamma * p_ * B2 / (r * r * gpB) : 0.0);
            // the compressional term vanishes by the choice of eta_k
            return A0 * f.xi * f.xi * r;
          },
          a, b, rule);
    }
    ScalingPoint pt;
    pt.k = k;
    pt.J = kTwoPiSq * Jv;
    pt.E = kTwoPiSq * Ev;
    pt.lambda_upper = pt.E / pt.J;
    st.points.push_back(pt);
  }

  // fit over the top decade of k
  const int kmax = st.points.back().k;
  std::vector<double> lk, lJ, lE, lL;
  for (const auto& pt : st.points) {
    if (pt.k * 10 < kmax) continue;
    if (pt.lambda_upper >= 0.0)
      throw SignFlip("lambda_upper >= 0 at k = " + std::to_string(pt.k) +
                     "; support or window is wrong");
    lk.push_back(std::log(double(pt.k)));
    lJ.push_back(std::log(pt.J));
    lE.push_back(std::log(-pt.E));
    lL.push_back(std::log(-pt.lambda_upper));
  }
  if (lk.size() < 3) throw ConfigError("need >= 3 k values in the top decade for the fit");
  Eigen::ArrayXd x = Eigen::Map<Eigen::ArrayXd>(lk.data(), lk.size());
  st.fitted_J_exponent = line_fit(x, Eigen::Map<Eigen::ArrayXd>(lJ.data(), lJ.size())).slope;
  st.fitted_E_exponent = line_fit(x, Eigen::Map<Eigen::ArrayXd>(lE.data(), lE.size())).slope;
  st.fitted_lambda_exponent = line_fit(x, Eigen::Map<Eigen::ArrayXd>(lL.data(), lL.size())).slope;
  st.divergent = st.fitted_lambda_exponent > 0.02;
  st.verdict = st.divergent ? "lambda_k -> -infinity (growth rate unbounded over k)"
                            : "lambda_upper(k) level or decaying (no divergence detected)";
  return st;
}

}  // namespace zpinch
