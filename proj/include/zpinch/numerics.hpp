#pragma once

#include <Eigen/Dense>

namespace zpinch {

// Value and first derivative of the degree-(npts-1) interpolating polynomial
// through (x_i, y_i), evaluated at x_eval. Points are shifted and scaled
// internally, so graded stencils stay well conditioned.
struct PolyEval {
  double value;
  double deriv;
  double deriv2;
};
PolyEval local_poly_eval(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, double x_eval);

// Derivative estimate at grid node i from a centered (shifted near the ends)
// stencil of `width` nodes.
double stencil_derivative(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, int i, int width);

// Smoothed derivative at node i: least-squares polynomial of given degree
// over `width` nodes (degree < width-1 damps node-level noise).
double ls_derivative(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, int i, int width,
                     int degree);

// Least-squares polynomial fit y ~ sum c_j x^j, degree deg; returns coefficients.
Eigen::VectorXd polyfit(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, int deg);

// Least-squares straight line y = a + b x; returns {a, b, stderr_of_b}.
struct LineFit {
  double intercept;
  double slope;
  double slope_stderr;
};
LineFit line_fit(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);

}  // namespace zpinch
