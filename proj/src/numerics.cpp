#include "zpinch/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zpinch {

PolyEval local_poly_eval(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, double x_eval) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != n) throw std::invalid_argument("local_poly_eval: bad stencil");
  const double scale = std::max((x - x_eval).abs().maxCoeff(), 1e-300);
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i) {
    const double t = (x[i] - x_eval) / scale;
    double pw = 1.0;
    for (int j = 0; j < n; ++j) {
      V(i, j) = pw;
      pw *= t;
    }
  }
  Eigen::VectorXd c = V.fullPivLu().solve(y.matrix());
  PolyEval out;
  out.value = c[0];
  out.deriv = (n > 1 ? c[1] / scale : 0.0);
  out.deriv2 = (n > 2 ? 2.0 * c[2] / (scale * scale) : 0.0);
  return out;
}

double stencil_derivative(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, int i, int width) {
  const int n = static_cast<int>(x.size());
  width = std::min(width, n);
  int lo = i - width / 2;
  lo = std::clamp(lo, 0, n - width);
  return local_poly_eval(x.segment(lo, width), y.segment(lo, width), x[i]).deriv;
}

double ls_derivative(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, int i, int width,
                     int degree) {
  const int n = static_cast<int>(x.size());
  width = std::min(width, n);
  int lo = i - width / 2;
  lo = std::clamp(lo, 0, n - width);
  const Eigen::ArrayXd xs = x.segment(lo, width) - x[i];
  const auto c = polyfit(xs, y.segment(lo, width), degree);
  return c[1];
}

Eigen::VectorXd polyfit(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, int deg) {
  const int n = static_cast<int>(x.size());
  if (n < deg + 1) throw std::invalid_argument("polyfit: not enough points");
  const double scale = std::max(x.abs().maxCoeff(), 1e-300);
  Eigen::MatrixXd V(n, deg + 1);
  for (int i = 0; i < n; ++i) {
    double pw = 1.0;
    for (int j = 0; j <= deg; ++j) {
      V(i, j) = pw;
      pw *= x[i] / scale;
    }
  }
  Eigen::VectorXd c = V.colPivHouseholderQr().solve(y.matrix());
  for (int j = 0; j <= deg; ++j) c[j] /= std::pow(scale, j);
  return c;
}

LineFit line_fit(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("line_fit: need >= 2 points");
  const double xm = x.mean(), ym = y.mean();
  const double sxx = ((x - xm) * (x - xm)).sum();
  const double sxy = ((x - xm) * (y - ym)).sum();
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.slope_stderr = (n > 2) ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace zpinch
