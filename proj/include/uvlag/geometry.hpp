#pragma once

#include <Eigen/Dense>

#include "uvlag/errors.hpp"
#include "uvlag/numerics.hpp"

namespace uvlag {

/// A linear subspace of R^n held as an orthonormal basis (n x k columns).
///
/// Bases are produced deterministically: spans come from an SVD with a fixed
/// sign convention, complements from orthogonalizing canonical seeds. Two
/// calls with the same inputs yield the same matrix.
class Subspace {
 public:
  /// The zero subspace {0} of R^n.
  static Subspace zero(int ambient_dim);

  /// All of R^n (identity basis).
  static Subspace full(int ambient_dim);

  /// From explicit orthonormal columns (validated to 1e-12).
  static Subspace from_orthonormal(const MatrixXd& basis);

  /// Span of the given columns. Numerical rank uses the cutoff
  /// sigma < 1e-10 * max(sigma_max, 1). Basis signs are canonicalized so the
  /// largest-magnitude entry of each column is positive.
  static Subspace from_span(const MatrixXd& columns);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const MatrixXd& basis() const { return basis_; }

  /// Orthogonal projection B B^T x.
  VectorXd project(const VectorXd& x) const;

  /// Coordinates B^T x (= pseudo-inverse for an orthonormal basis).
  VectorXd coords(const VectorXd& x) const { return basis_.transpose() * x; }

  /// Embed coordinates back into R^n.
  VectorXd embed(const VectorXd& w) const { return basis_ * w; }

  /// Deterministic orthogonal complement (canonical seeds e1..en).
  Subspace orthogonal_complement() const;

  bool contains(const VectorXd& x, double tol = 1e-10) const {
    return (x - project(x)).norm() <= tol * std::max(1.0, x.norm());
  }

 private:
  explicit Subspace(MatrixXd basis) : basis_(std::move(basis)) {}
  MatrixXd basis_;
};

/// Largest principal angle between two subspaces of equal dimension;
/// pi/2 when the dimensions differ, 0 when both are {0}.
double max_principal_angle(const Subspace& a, const Subspace& b);

/// Convenience: subspaces considered equal when dims match and the largest
/// principal angle is below tol.
bool subspaces_match(const Subspace& a, const Subspace& b, double tol);

}  // namespace uvlag
