#include "uvlag/funcmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace uvlag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SmoothPiece quadratic_piece(std::string label, const MatrixXd& half_hessian,
                            const VectorXd& linear, double constant) {
  // value = x' H x + c' x + d with H given as the full coefficient matrix of
  // the quadratic form (value uses x' H x directly).
  return SmoothPiece{
      std::move(label),
      [half_hessian, linear, constant](const VectorXd& x) {
        return x.dot(half_hessian * x) + linear.dot(x) + constant;
      },
      [half_hessian, linear](const VectorXd& x) {
        return ((half_hessian + half_hessian.transpose()) * x + linear).eval();
      },
      [half_hessian](const VectorXd&) {
        return (half_hessian + half_hessian.transpose()).eval();
      }};
}

MatrixXd diag2(double a, double b) {
  MatrixXd m = MatrixXd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

Problem::Problem(std::string name, int dim, Structure structure,
                 VectorXd base_point, double eps_bar, double rho)
    : name_(std::move(name)),
      dim_(dim),
      structure_(std::move(structure)),
      base_point_(std::move(base_point)),
      eps_bar_(eps_bar),
      rho_(rho) {
  if (eps_bar_ <= 0.0) throw PreconditionViolation("eps_bar must be positive");
  if (rho_ < 0.0 || rho_ > 2.0)
    throw PreconditionViolation("rho must lie in [0, 2]");
  if (!std::isfinite(eval(base_point_)))
    throw PreconditionViolation("f(base_point) must be finite");
}

double Problem::eval(const VectorXd& x) const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteMax>) {
          double best = -kInf;
          for (const auto& p : s.pieces) best = std::max(best, p.value(x));
          return best;
        } else if constexpr (std::is_same_v<T, SmoothPlusAbs>) {
          double v = s.smooth.value(x);
          for (int j : s.abs_coords) v += std::abs(x[j]);
          return v;
        } else {
          if (!s.set.contains(x)) return kInf;
          return s.smooth.value(x);
        }
      },
      structure_);
}

SubdiffResult Problem::limiting_subdifferential(const VectorXd& x) const {
  return std::visit(
      [&](const auto& s) -> SubdiffResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteMax>) {
          double best = -kInf;
          std::vector<double> vals;
          for (const auto& p : s.pieces) {
            vals.push_back(p.value(x));
            best = std::max(best, vals.back());
          }
          std::vector<VectorXd> gens;
          for (size_t i = 0; i < s.pieces.size(); ++i)
            if (vals[i] >= best - kActiveTol)
              gens.push_back(s.pieces[i].gradient(x));
          return SubdiffResult{x, Polytope(std::move(gens)), true};
        } else if constexpr (std::is_same_v<T, SmoothPlusAbs>) {
          const VectorXd g0 = s.smooth.gradient(x);
          std::vector<int> active;
          VectorXd fixed = g0;
          for (int j : s.abs_coords) {
            if (std::abs(x[j]) <= kActiveTol)
              active.push_back(j);
            else
              fixed[j] += (x[j] > 0.0 ? 1.0 : -1.0);
          }
          std::vector<VectorXd> gens;
          const int a = static_cast<int>(active.size());
          for (unsigned mask = 0; mask < (1u << a); ++mask) {
            VectorXd g = fixed;
            for (int b = 0; b < a; ++b)
              g[active[b]] += (mask & (1u << b)) ? 1.0 : -1.0;
            gens.push_back(g);
          }
          return SubdiffResult{x, Polytope(std::move(gens)), true};
        } else {
          if (!s.set.contains(x))
            throw OracleUnavailable("point outside the indicator's set: " +
                                    name_);
          const auto dirs = s.set.normals(x);
          if (!dirs.has_value())
            throw OracleUnavailable(
                "oracle unavailable: no normal-cone description at this "
                "point of " +
                name_);
          if (!dirs->empty())
            throw OracleUnavailable(
                "oracle unavailable: indicator boundary gives an unbounded "
                "subdifferential for " +
                name_);
          // interior: plain gradient
          std::vector<VectorXd> gens{s.smooth.gradient(x)};
          return SubdiffResult{x, Polytope(std::move(gens)), true};
        }
      },
      structure_);
}

double Problem::directional_derivative(const VectorXd& x,
                                       const VectorXd& w) const {
  const SubdiffResult sd = limiting_subdifferential(x);
  if (!sd.regular_equals_limiting)
    throw OracleUnavailable("directional derivative requires regularity at x");
  return sd.polytope.support(w);
}

// ----------------------------------------------------------------------------
// Catalog.
//
// P1 x1^2 + |x2|                convex
// P2 -0.5 x1^2 + |x2|           nonconvex, modulus exactly 1
// P3 |x1| + |x2|                U = {0}
// P4 x1^2 + x2^2 at (1,0)       V = {0}
// P5 x1^2 + max(2 x2, -x2)      asymmetric subdifferential segment
// P6 |x2 - x1^2|                curved fast track, modulus exactly 2
// ----------------------------------------------------------------------------

namespace {

std::map<std::string, Problem> build_catalog() {
  std::map<std::string, Problem> cat;
  const VectorXd zero2 = VectorXd::Zero(2);

  cat.emplace("P1", Problem("P1", 2,
                            SmoothPlusAbs{quadratic_piece("x1^2", diag2(1, 0),
                                                          zero2, 0.0),
                                          {1}},
                            zero2, 1.0, 0.0));

  cat.emplace("P2", Problem("P2", 2,
                            SmoothPlusAbs{quadratic_piece(
                                              "-0.5 x1^2", diag2(-0.5, 0),
                                              zero2, 0.0),
                                          {1}},
                            zero2, 0.5, 1.0));

  cat.emplace("P3", Problem("P3", 2,
                            SmoothPlusAbs{quadratic_piece("0", diag2(0, 0),
                                                          zero2, 0.0),
                                          {0, 1}},
                            zero2, 1.0, 0.0));

  cat.emplace("P4",
              Problem("P4", 2,
                      FiniteMax{{quadratic_piece("x1^2+x2^2", diag2(1, 1),
                                                 zero2, 0.0)}},
                      make_vector({1.0, 0.0}), 1.0, 0.0));

  cat.emplace("P5", Problem("P5", 2,
                            FiniteMax{{quadratic_piece("x1^2+2x2", diag2(1, 0),
                                                       make_vector({0.0, 2.0}),
                                                       0.0),
                                       quadratic_piece("x1^2-x2", diag2(1, 0),
                                                       make_vector({0.0, -1.0}),
                                                       0.0)}},
                            zero2, 1.0, 0.0));

  cat.emplace("P6", Problem("P6", 2,
                            FiniteMax{{quadratic_piece("x2-x1^2", diag2(-1, 0),
                                                       make_vector({0.0, 1.0}),
                                                       0.0),
                                       quadratic_piece("x1^2-x2", diag2(1, 0),
                                                       make_vector({0.0, -1.0}),
                                                       0.0)}},
                            zero2, 1.0, 2.0));
  return cat;
}

const std::map<std::string, Problem>& catalog_map() {
  static const std::map<std::string, Problem> cat = build_catalog();
  return cat;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"P1", "P2", "P3",
                                              "P4", "P5", "P6"};
  return names;
}

const Problem& catalog(const std::string& name) {
  const auto& cat = catalog_map();
  const auto it = cat.find(name);
  if (it == cat.end())
    throw PreconditionViolation("unknown catalog problem: " + name);
  return it->second;
}

bool is_catalog_name(const std::string& name) {
  return catalog_map().count(name) > 0;
}

const std::vector<std::string>& fast_track_problems() {
  // base points of P1, P3, P6 are local minimizers; P2's is only a critical
  // point of the nonconvex model and P4's is not a minimizer at all
  static const std::vector<std::string> names{"P1", "P3", "P6"};
  return names;
}

}  // namespace uvlag
