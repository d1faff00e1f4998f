#pragma once

#include <optional>

#include "uvlag/funcmodel.hpp"

namespace uvlag {

/// Orthonormal UV-decomposition at the base point: V spans the differences of
/// the subdifferential, U is its orthogonal complement. Immutable after
/// construction.
class UVFrame {
 public:
  UVFrame(MatrixXd Ubar, MatrixXd Vbar, VectorXd origin, Polytope subdiff,
          VectorXd gtilde);

  int ambient_dim() const { return static_cast<int>(origin_.size()); }
  int u_dim() const { return static_cast<int>(Ubar_.cols()); }
  int v_dim() const { return static_cast<int>(Vbar_.cols()); }

  const MatrixXd& Ubar() const { return Ubar_; }
  const MatrixXd& Vbar() const { return Vbar_; }
  const VectorXd& origin() const { return origin_; }
  const Polytope& subdiff() const { return subdiff_; }
  const VectorXd& gtilde() const { return gtilde_; }

  Subspace U() const { return Subspace::from_orthonormal(Ubar_); }
  Subspace V() const { return Subspace::from_orthonormal(Vbar_); }

  VectorXd u_coords(const VectorXd& x) const { return Ubar_.transpose() * x; }
  VectorXd v_coords(const VectorXd& x) const { return Vbar_.transpose() * x; }

  /// origin + Ubar u + Vbar v.
  VectorXd point(const VectorXd& u, const VectorXd& v) const {
    return origin_ + Ubar_ * u + Vbar_ * v;
  }

 private:
  MatrixXd Ubar_, Vbar_;
  VectorXd origin_;
  Polytope subdiff_;
  VectorXd gtilde_;
};

/// Build the frame at the base point. Default gtilde is the first generator
/// of the subdifferential.
UVFrame build_frame(const Problem& problem,
                    std::optional<VectorXd> gtilde = std::nullopt);

/// Computes U' = {w : df(xbar)(-w) = -df(xbar)(w)} from the
/// directional-derivative oracle, computes the normal cone of the
/// subdifferential at one eps-relative-interior point, and asserts both match
/// the frame's U (principal angles <= 1e-8). Returns U'. Throws
/// InvariantViolation on mismatch.
Subspace u_prime_crosscheck(const Problem& problem,
                            std::optional<double> eps = std::nullopt,
                            std::uint64_t seed = 0);

/// Max over generator pairs of ||P_U g - P_U g'||; contract <= 1e-10.
double gu_constancy(const Problem& problem, const UVFrame& frame);

}  // namespace uvlag
