#include "uvlag/oracle.hpp"

#include <cmath>
#include <limits>

namespace uvlag {

namespace {

// Feasible range of coordinate d inside the ball, holding the others fixed.
std::pair<double, double> coord_range(const VectorXd& v, int d, double radius) {
  double rest = 0.0;
  for (int i = 0; i < v.size(); ++i)
    if (i != d) rest += v[i] * v[i];
  const double room = std::sqrt(std::max(radius * radius - rest, 0.0));
  return {-room, room};
}

}  // namespace

DenseOracleResult dense_grid_min(const std::function<double(const VectorXd&)>& phi,
                                 int dim, double radius, int n_per_dim) {
  DenseOracleResult out{std::numeric_limits<double>::infinity(), VectorXd(dim), 0};
  if (dim == 0) {
    out.value = phi(VectorXd(0));
    out.argmin = VectorXd(0);
    out.evals = 1;
    return out;
  }
  const double spacing = 2.0 * radius / static_cast<double>(n_per_dim - 1);
  long total = 1;
  for (int d = 0; d < dim; ++d) total *= n_per_dim;
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    VectorXd v(dim);
    for (int d = dim - 1; d >= 0; --d) {
      const int i = static_cast<int>(rem % n_per_dim);
      rem /= n_per_dim;
      v[d] = -radius + spacing * i;
    }
    if (v.norm() > radius + 1e-15) continue;
    const double val = phi(v);
    ++out.evals;
    if (val < out.value) {
      out.value = val;
      out.argmin = v;
    }
  }
  // local polish: cyclic ternary shrink per coordinate, bracket one lattice
  // cell wide, clamped to the ball
  VectorXd v = out.argmin;
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (int d = 0; d < dim; ++d) {
      auto [lo_room, hi_room] = coord_range(v, d, radius);
      double lo = std::max(v[d] - spacing, lo_room);
      double hi = std::min(v[d] + spacing, hi_room);
      auto eval_at = [&](double t) {
        VectorXd w = v;
        w[d] = t;
        ++out.evals;
        return phi(w);
      };
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (eval_at(m1) <= eval_at(m2))
          hi = m2;
        else
          lo = m1;
      }
      const double t = 0.5 * (lo + hi);
      const double cand = eval_at(t);
      if (cand <= out.value) {
        v[d] = t;
        out.value = cand;
        out.argmin = v;
      }
    }
  }
  return out;
}

}  // namespace uvlag
