#include "uvlag/uvframe.hpp"

#include <Eigen/LU>

#include <sstream>

namespace uvlag {

UVFrame::UVFrame(MatrixXd Ubar, MatrixXd Vbar, VectorXd origin,
                 Polytope subdiff, VectorXd gtilde)
    : Ubar_(std::move(Ubar)),
      Vbar_(std::move(Vbar)),
      origin_(std::move(origin)),
      subdiff_(std::move(subdiff)),
      gtilde_(std::move(gtilde)) {
  const int n = ambient_dim();
  if (u_dim() + v_dim() != n)
    throw InvariantViolation("dim U + dim V must equal the ambient dimension");
  if (u_dim() > 0 && v_dim() > 0 &&
      (Ubar_.transpose() * Vbar_).cwiseAbs().maxCoeff() > 1e-12)
    throw InvariantViolation("U and V bases are not orthogonal to 1e-12");
  // reconstruction check on the canonical basis
  for (int i = 0; i < n; ++i) {
    const VectorXd e = VectorXd::Unit(n, i);
    const VectorXd r = Ubar_ * u_coords(e) + Vbar_ * v_coords(e);
    if ((r - e).norm() > 1e-12)
      throw InvariantViolation("frame does not reconstruct the identity");
  }
}

UVFrame build_frame(const Problem& problem, std::optional<VectorXd> gtilde) {
  const SubdiffResult sd =
      problem.limiting_subdifferential(problem.base_point());
  const VectorXd g = gtilde.value_or(sd.polytope.generators()[0]);
  const Subspace V = span_of_differences(sd.polytope, g);
  const Subspace U = V.orthogonal_complement();
  return UVFrame(U.basis(), V.basis(), problem.base_point(), sd.polytope, g);
}

Subspace u_prime_crosscheck(const Problem& problem, std::optional<double> eps,
                            std::uint64_t seed) {
  const UVFrame frame = build_frame(problem);
  const VectorXd& xbar = problem.base_point();
  const int n = problem.dim();

  // U' from the difference matrix, via an LU kernel (a route independent of
  // the SVD used by build_frame), then validated against the
  // directional-derivative oracle.
  const auto& gens = frame.subdiff().generators();
  MatrixXd D(static_cast<int>(gens.size()), n);
  for (size_t i = 0; i < gens.size(); ++i)
    D.row(static_cast<int>(i)) = (gens[i] - gens[0]).transpose();
  Eigen::FullPivLU<MatrixXd> lu(D);
  lu.setThreshold(1e-10);
  const MatrixXd kernel = lu.kernel();
  const Subspace uprime = (lu.dimensionOfKernel() == n && gens.size() == 1)
                              ? Subspace::full(n)
                              : Subspace::from_span(kernel);

  const double scale = 1.0 + frame.subdiff().support(VectorXd::Ones(n));
  for (int c = 0; c < uprime.dim(); ++c) {
    const VectorXd w = uprime.basis().col(c);
    const double fwd = problem.directional_derivative(xbar, w);
    const double bwd = problem.directional_derivative(xbar, -w);
    if (std::abs(fwd + bwd) > 1e-10 * scale)
      throw InvariantViolation(
          "support-function antisymmetry fails on a U' basis vector");
  }
  // sampled directions with a V-component must break the equality
  Rng rng(seed);
  if (frame.v_dim() > 0) {
    for (int trial = 0; trial < 32; ++trial) {
      const VectorXd w =
          Subspace::from_orthonormal(frame.Vbar()).embed(rng.on_sphere(frame.v_dim()));
      const double fwd = problem.directional_derivative(xbar, w);
      const double bwd = problem.directional_derivative(xbar, -w);
      if (std::abs(fwd + bwd) <= 1e-12)
        throw InvariantViolation(
            "a direction with a V-component passes the U' equality");
    }
  }

  // normal cone at one eps-relative-interior subgradient
  Polytope sub = frame.subdiff();
  sub.synthesize_facets();
  const Subspace V = frame.V();
  double use_eps;
  if (eps.has_value()) {
    use_eps = *eps;
  } else {
    const double max_eps = max_feasible_epsilon(sub, V);
    use_eps = std::isfinite(max_eps) ? 0.5 * std::min(max_eps, problem.eps_bar())
                                     : 0.5 * problem.eps_bar();
  }
  const Polytope ri = epsilon_relative_interior(sub, V, use_eps);
  const NormalCone cone = normal_cone(frame.subdiff(), ri.centroid());
  if (!cone.is_subspace())
    throw InvariantViolation(
        "normal cone at an eps-relative-interior point is not a subspace");

  const Subspace U = frame.U();
  const double a_uprime = max_principal_angle(U, uprime);
  const double a_cone = max_principal_angle(U, cone.lineality);
  if (a_uprime > 1e-8 || a_cone > 1e-8 || uprime.dim() != U.dim() ||
      cone.lineality.dim() != U.dim()) {
    std::ostringstream msg;
    msg << "U / U' / normal-cone mismatch for " << problem.name()
        << ": dims (" << U.dim() << ", " << uprime.dim() << ", "
        << cone.lineality.dim() << "), angles (" << a_uprime << ", " << a_cone
        << ")";
    throw InvariantViolation(msg.str());
  }
  return uprime;
}

double gu_constancy(const Problem& problem, const UVFrame& frame) {
  (void)problem;
  const auto& gens = frame.subdiff().generators();
  double spread = 0.0;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = i + 1; j < gens.size(); ++j)
      spread = std::max(
          spread, (frame.u_coords(gens[i]) - frame.u_coords(gens[j])).norm());
  return spread;
}

}  // namespace uvlag
