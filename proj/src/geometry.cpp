#include "uvlag/geometry.hpp"

#include <Eigen/SVD>

namespace uvlag {

namespace {

// Flip each column so its largest-magnitude entry (first among ties) is
// positive. Removes SVD sign ambiguity.
void canonicalize_signs(MatrixXd& basis) {
  for (int c = 0; c < basis.cols(); ++c) {
    int arg = 0;
    double best = 0.0;
    for (int r = 0; r < basis.rows(); ++r) {
      if (std::abs(basis(r, c)) > best + 1e-15) {
        best = std::abs(basis(r, c));
        arg = r;
      }
    }
    if (basis(arg, c) < 0.0) basis.col(c) = -basis.col(c);
  }
}

}  // namespace

Subspace Subspace::zero(int ambient_dim) {
  return Subspace(MatrixXd(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
  return Subspace(MatrixXd::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_orthonormal(const MatrixXd& basis) {
  if (basis.cols() == 0) return Subspace(basis);
  const MatrixXd gram = basis.transpose() * basis;
  const MatrixXd eye = MatrixXd::Identity(basis.cols(), basis.cols());
  if ((gram - eye).cwiseAbs().maxCoeff() > 1e-12)
    throw InvariantViolation("subspace basis is not orthonormal to 1e-12");
  return Subspace(basis);
}

Subspace Subspace::from_span(const MatrixXd& columns) {
  const int n = static_cast<int>(columns.rows());
  if (columns.cols() == 0) return zero(n);
  Eigen::JacobiSVD<MatrixXd> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(sv.size() > 0 ? sv[0] : 0.0, 1.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++rank;
  MatrixXd basis = svd.matrixU().leftCols(rank);
  canonicalize_signs(basis);
  return Subspace(std::move(basis));
}

VectorXd Subspace::project(const VectorXd& x) const {
  if (dim() == 0) return VectorXd::Zero(ambient_dim());
  return basis_ * (basis_.transpose() * x);
}

Subspace Subspace::orthogonal_complement() const {
  const int n = ambient_dim();
  MatrixXd acc(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    VectorXd r = VectorXd::Unit(n, i);
    r -= project(r);
    for (int j = 0; j < k; ++j) r -= acc.col(j).dot(r) * acc.col(j);
    // second Gram-Schmidt pass for orthogonality at the 1e-15 level
    for (int j = 0; j < k; ++j) r -= acc.col(j).dot(r) * acc.col(j);
    const double nrm = r.norm();
    if (nrm > 1e-9) acc.col(k++) = r / nrm;
  }
  MatrixXd basis = acc.leftCols(k);
  return Subspace(std::move(basis));
}

double max_principal_angle(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return M_PI / 2.0;
  if (a.dim() == 0) return 0.0;
  // sine formulation: accurate near zero, unlike acos of the cosine
  const MatrixXd resid = b.basis() - a.basis() * (a.basis().transpose() * b.basis());
  Eigen::JacobiSVD<MatrixXd> svd(resid);
  const double smax = svd.singularValues().maxCoeff();
  return std::asin(std::clamp(smax, 0.0, 1.0));
}

bool subspaces_match(const Subspace& a, const Subspace& b, double tol) {
  return a.dim() == b.dim() && max_principal_angle(a, b) <= tol;
}

}  // namespace uvlag
