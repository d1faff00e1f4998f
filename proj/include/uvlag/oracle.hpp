#pragma once

#include <functional>

#include "uvlag/numerics.hpp"

namespace uvlag {

/// Independent minimization oracle used to cross-check the pattern-search
/// path: a dense lattice scan (default 2001 points per dimension) over the
/// closed ball, followed by cyclic per-coordinate bracket shrinking around
/// the incumbent. Shares no code with the production solver.
struct DenseOracleResult {
  double value;
  VectorXd argmin;
  long evals;
};

DenseOracleResult dense_grid_min(const std::function<double(const VectorXd&)>& phi,
                                 int dim, double radius, int n_per_dim = 2001);

}  // namespace uvlag
