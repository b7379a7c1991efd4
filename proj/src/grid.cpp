#include "zpinch/grid.hpp"

#include <cmath>

#include "zpinch/errors.hpp"

namespace zpinch {

RadialGrid make_grid(const GridSpec& spec, double r0) {
  if (spec.n < 16) throw ConfigError("grid needs at least 16 nodes");
  RadialGrid g;
  g.r0 = r0;
  g.r.resize(spec.n);
  if (spec.clustering == Clustering::Uniform) {
    for (int i = 0; i < spec.n; ++i) g.r[i] = r0 * double(i + 1) / spec.n;
    return g;
  }
  const int n_out = std::max(2, static_cast<int>(std::lround(spec.n * spec.outer_share)));
  const int n_in = spec.n - n_out;
  const double r_split = r0 * (1.0 - spec.outer_fraction);
  // inner block: power-law grading toward the axis
  for (int i = 1; i <= n_in; ++i)
    g.r[i - 1] = r_split * std::pow(double(i) / n_in, spec.q_axis);
  // outer block: distances from r0 graded toward the edge, last node exactly r0
  for (int j = 1; j <= n_out; ++j) {
    const double d = (r0 - r_split) * std::pow(double(n_out - j) / n_out, spec.q_edge);
    g.r[n_in + j - 1] = r0 - d;
  }
  g.r[spec.n - 1] = r0;
  return g;
}

}  // namespace zpinch
