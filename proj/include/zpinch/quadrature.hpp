#pragma once

#include <Eigen/Dense>

namespace zpinch {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  Eigen::ArrayXd x;
  Eigen::ArrayXd w;
};

// Nodes/weights computed once per order via Newton iteration on P_n.
const GaussRule& gauss_rule(int npts);

// integral of f over [a, b] with a single panel
template <class F>
double gauss_panel(F&& f, double a, double b, const GaussRule& g) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (Eigen::Index i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + h * g.x[i]);
  return s * h;
}

// composite rule with uniform panels
template <class F>
double gauss_composite(F&& f, double a, double b, int panels, const GaussRule& g) {
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) s += gauss_panel(f, a + p * h, a + (p + 1) * h, g);
  return s;
}

// composite rule with panels graded geometrically toward b (for integrands
// that are steep or weakly singular at the right endpoint)
template <class F>
double gauss_graded_right(F&& f, double a, double b, int panels, const GaussRule& g,
                          double ratio = 0.5) {
  double s = 0.0;
  double left = a;
  double d = (b - a) * ratio;  // distance of next breakpoint from b
  for (int p = 0; p < panels - 1; ++p) {
    s += gauss_panel(f, left, b - d, g);
    left = b - d;
    d *= ratio;
  }
  s += gauss_panel(f, left, b, g);
  return s;
}

}  // namespace zpinch
