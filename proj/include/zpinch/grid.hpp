#pragma once

#include <Eigen/Dense>

namespace zpinch {

enum class Clustering { Uniform, TwoSided };

/// Node count plus clustering policy. TwoSided grades nodes toward both the
/// axis (coordinate singularity) and the plasma edge (pressure degeneracy),
/// by default putting one third of the nodes in the outer 10% of the radius.
struct GridSpec {
  int n = 256;
  Clustering clustering = Clustering::TwoSided;
  double outer_fraction = 0.1;
  double outer_share = 1.0 / 3.0;
  double q_axis = 1.4;  // grading strength toward r = 0
  double q_edge = 2.0;  // grading strength toward r = r0
};

/// Strictly increasing nodes r_1 < ... < r_n = r0 covering (0, r0]. The origin
/// is not a node: the first element is (0, r_1] and every trial field carries
/// xi(0) = 0 built into the basis.
struct RadialGrid {
  Eigen::ArrayXd r;
  double r0 = 1.0;

  int n() const { return static_cast<int>(r.size()); }
  double left(int e) const { return e == 0 ? 0.0 : r[e - 1]; }
  double right(int e) const { return r[e]; }
  double h(int e) const { return right(e) - left(e); }
};

RadialGrid make_grid(const GridSpec& spec, double r0);

}  // namespace zpinch
