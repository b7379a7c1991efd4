#include "zpinch/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zpinch/errors.hpp"
#include "zpinch/numerics.hpp"

namespace zpinch {

std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::PowerLaw: return "power-law";
    case ProfileKind::Exponential: return "exponential";
    case ProfileKind::UniformCurrent: return "uniform-current";
    case ProfileKind::Tabulated: return "tabulated";
  }
  return "?";
}

ProfileKind profile_kind_from_string(const std::string& s) {
  if (s == "power-law" || s == "power_law") return ProfileKind::PowerLaw;
  if (s == "exponential") return ProfileKind::Exponential;
  if (s == "uniform-current" || s == "uniform_current" || s == "parabolic")
    return ProfileKind::UniformCurrent;
  if (s == "tabulated") return ProfileKind::Tabulated;
  throw ConfigError("unknown profile kind: " + s);
}

namespace {

// index of the tabulated interval containing r
int locate(const Eigen::ArrayXd& x, double r) {
  const int n = static_cast<int>(x.size());
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (x[mid] <= r ? lo : hi) = mid;
  }
  return lo;
}

struct Hermite {
  double value, deriv, deriv2;
};

Hermite hermite_eval(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, const Eigen::ArrayXd& dy,
                     double r) {
  const int i = locate(x, r);
  const double h = x[i + 1] - x[i];
  const double t = (r - x[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  Hermite out;
  out.value = h00 * y[i] + h10 * h * dy[i] + h01 * y[i + 1] + h11 * h * dy[i + 1];
  const double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
  out.deriv = (d00 * y[i] + d01 * y[i + 1]) / h + d10 * dy[i] + d11 * dy[i + 1];
  const double s00 = 12 * t - 6, s10 = 6 * t - 4;
  const double s01 = -12 * t + 6, s11 = 6 * t - 2;
  out.deriv2 = (s00 * y[i] + s01 * y[i + 1]) / (h * h) + (s10 * dy[i] + s11 * dy[i + 1]) / h;
  return out;
}

}  // namespace

double PressureProfile::p(double r) const {
  switch (kind) {
    case ProfileKind::UniformCurrent: {
      const double s = r / r0;
      return C * (1.0 - s * s);
    }
    case ProfileKind::PowerLaw: {
      const double q = std::max(r0 * r0 - r * r, 0.0);
      return C * std::pow(q, beta);
    }
    case ProfileKind::Exponential: {
      if (r >= r0) return 0.0;
      const double c0 = beta / std::pow(r0, beta + 1.0);
      return C * std::exp(c0 * r - std::pow(r0 - r, -beta));
    }
    case ProfileKind::Tabulated:
      if (r <= tab_r[0]) return tab_p[0];
      if (r >= tab_r[tab_r.size() - 1]) return tab_p[tab_p.size() - 1];
      return hermite_eval(tab_r, tab_p, tab_dp, r).value;
  }
  return 0.0;
}

double PressureProfile::dp(double r) const {
  switch (kind) {
    case ProfileKind::UniformCurrent:
      return -2.0 * C * r / (r0 * r0);
    case ProfileKind::PowerLaw: {
      const double q = std::max(r0 * r0 - r * r, 0.0);
      if (q == 0.0) return (beta == 1.0) ? -2.0 * C * r : 0.0;
      return -2.0 * C * beta * r * std::pow(q, beta - 1.0);
    }
    case ProfileKind::Exponential: {
      if (r >= r0) return 0.0;
      const double c0 = beta / std::pow(r0, beta + 1.0);
      const double hp = c0 - beta * std::pow(r0 - r, -beta - 1.0);
      return p(r) * hp;
    }
    case ProfileKind::Tabulated:
      if (r <= tab_r[0]) return tab_dp[0];
      if (r >= tab_r[tab_r.size() - 1]) return tab_dp[tab_dp.size() - 1];
      return hermite_eval(tab_r, tab_p, tab_dp, r).deriv;
  }
  return 0.0;
}

double PressureProfile::d2p(double r) const {
  switch (kind) {
    case ProfileKind::UniformCurrent:
      return -2.0 * C / (r0 * r0);
    case ProfileKind::PowerLaw: {
      const double q = std::max(r0 * r0 - r * r, 0.0);
      if (q == 0.0) {
        if (beta == 1.0) return -2.0 * C;
        if (beta == 2.0) return 8.0 * C * r * r;
        if (beta > 2.0) return 0.0;
        return std::numeric_limits<double>::infinity();  // 1 < beta < 2: p'' blows up at r0
      }
      return C * beta * std::pow(q, beta - 2.0) * (4.0 * (beta - 1.0) * r * r - 2.0 * q);
    }
    case ProfileKind::Exponential: {
      if (r >= r0) return 0.0;
      const double c0 = beta / std::pow(r0, beta + 1.0);
      const double hp = c0 - beta * std::pow(r0 - r, -beta - 1.0);
      const double hpp = -beta * (beta + 1.0) * std::pow(r0 - r, -beta - 2.0);
      return p(r) * (hp * hp + hpp);
    }
    case ProfileKind::Tabulated:
      if (r <= tab_r[0] || r >= tab_r[tab_r.size() - 1]) {
        const double rc = std::clamp(r, tab_r[0], tab_r[tab_r.size() - 1]);
        return hermite_eval(tab_r, tab_p, tab_dp, std::nextafter(rc, 0.5 * (tab_r[0] + tab_r[tab_r.size() - 1]))).deriv2;
      }
      return hermite_eval(tab_r, tab_p, tab_dp, r).deriv2;
  }
  return 0.0;
}

PressureProfile PressureProfile::power_law(double C, double beta, double gamma, double r0,
                                           double rw) {
  PressureProfile pr;
  pr.kind = ProfileKind::PowerLaw;
  pr.C = C;
  pr.beta = beta;
  pr.gamma = gamma;
  pr.r0 = r0;
  pr.rw = rw;
  return pr;
}

PressureProfile PressureProfile::exponential(double C, double beta, double gamma, double r0,
                                             double rw) {
  PressureProfile pr;
  pr.kind = ProfileKind::Exponential;
  pr.C = C;
  pr.beta = beta;
  pr.gamma = gamma;
  pr.r0 = r0;
  pr.rw = rw;
  return pr;
}

PressureProfile PressureProfile::uniform_current(double J0, double gamma, double r0, double rw) {
  PressureProfile pr;
  pr.kind = ProfileKind::UniformCurrent;
  pr.C = J0 * J0 * r0 * r0 / 4.0;
  pr.beta = 1.0;
  pr.gamma = gamma;
  pr.r0 = r0;
  pr.rw = rw;
  return pr;
}

PressureProfile PressureProfile::tabulated(const Eigen::ArrayXd& r, const Eigen::ArrayXd& p,
                                           double gamma, double A, double rw) {
  if (r.size() != p.size() || r.size() < 8)
    throw ConfigError("tabulated profile needs >= 8 (r, p) samples");
  for (Eigen::Index i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw ConfigError("tabulated profile radii must increase");
  if (r[0] != 0.0) throw ConfigError("tabulated profile must start at r = 0");
  PressureProfile pr;
  pr.kind = ProfileKind::Tabulated;
  pr.gamma = gamma;
  pr.A = A;
  pr.r0 = r[r.size() - 1];
  pr.rw = rw;
  pr.tab_r = r;
  pr.tab_p = p;
  // slopes by local 5-point polynomial differentiation (4th order)
  const int n = static_cast<int>(r.size());
  pr.tab_dp.resize(n);
  for (int i = 0; i < n; ++i) pr.tab_dp[i] = stencil_derivative(r, p, i, std::min(5, n));
  pr.C = p.maxCoeff();
  pr.beta = 1.0;
  return pr;
}

}  // namespace zpinch
