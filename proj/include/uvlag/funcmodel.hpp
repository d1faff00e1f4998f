#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uvlag/polytope.hpp"

namespace uvlag {

/// Closed-form smooth piece: value, gradient, Hessian.
struct SmoothPiece {
  std::string label;
  std::function<double(const VectorXd&)> value;
  std::function<VectorXd(const VectorXd&)> gradient;
  std::function<MatrixXd(const VectorXd&)> hessian;
};

/// f(x) = max_i piece_i(x).
struct FiniteMax {
  std::vector<SmoothPiece> pieces;
};

/// f(x) = smooth(x) + sum over abs_coords j of |x_j|.
struct SmoothPlusAbs {
  SmoothPiece smooth;
  std::vector<int> abs_coords;
};

/// A convex set with membership and (where available) a normal-cone oracle.
struct IndicatorSet {
  std::string label;
  std::function<bool(const VectorXd&)> contains;
  // unit normal directions at x; nullopt means "no description available here"
  std::function<std::optional<std::vector<VectorXd>>(const VectorXd&)> normals;
};

/// f(x) = smooth(x) + indicator of the set.
struct SmoothPlusIndicator {
  SmoothPiece smooth;
  IndicatorSet set;
};

using Structure = std::variant<FiniteMax, SmoothPlusAbs, SmoothPlusIndicator>;

/// Limiting subdifferential at a point, as a polytope. The flag records
/// whether the regular (Frechet) subdifferential coincides with it, which is
/// the case whenever the exact max/sum rule applies.
struct SubdiffResult {
  VectorXd point;
  Polytope polytope;
  bool regular_equals_limiting;
};

/// A structured nonsmooth function with a base point and the prox-regularity
/// constants derived for the catalog. Oracles are exact: the subdifferential
/// is computed only where the max rule / sum rule is exact, and errors
/// otherwise.
class Problem {
 public:
  Problem(std::string name, int dim, Structure structure, VectorXd base_point,
          double eps_bar, double rho);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const VectorXd& base_point() const { return base_point_; }
  double eps_bar() const { return eps_bar_; }
  double rho() const { return rho_; }
  const Structure& structure() const { return structure_; }

  /// Exact extended-real value (+infinity outside an indicator's set).
  double eval(const VectorXd& x) const;

  /// Exact limiting subdifferential; throws OracleUnavailable where the
  /// calculus rules are not exact (indicator boundaries).
  SubdiffResult limiting_subdifferential(const VectorXd& x) const;

  /// max over the subdifferential of <g, w>; requires regularity at x.
  double directional_derivative(const VectorXd& x, const VectorXd& w) const;

 private:
  std::string name_;
  int dim_;
  Structure structure_;
  VectorXd base_point_;
  double eps_bar_;
  double rho_;
};

/// Restriction of a problem to an affine subspace: w -> f(base + basis w).
struct Restriction {
  Subspace subspace;
  VectorXd base;
  const Problem* problem;
  double eval(const VectorXd& w) const {
    return problem->eval(base + subspace.embed(w));
  }
};

/// Piece-gap tolerance for active-set detection.
inline constexpr double kActiveTol = 1e-10;

/// The six catalog problems P1..P6.
const std::vector<std::string>& catalog_names();
const Problem& catalog(const std::string& name);
bool is_catalog_name(const std::string& name);

/// Problems whose base point is a local minimizer; the fast-track and
/// partial-smoothness batteries run on exactly these.
const std::vector<std::string>& fast_track_problems();

}  // namespace uvlag
