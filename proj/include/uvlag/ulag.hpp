#pragma once

#include "uvlag/certificate.hpp"
#include "uvlag/uvframe.hpp"

namespace uvlag {

/// Inner-solver knobs. Defaults match the verification suite; the refinement
/// runs well below the reporting tolerances so that kink locations are
/// resolved to ~1e-12.
struct SolveOptions {
  int grid_points = 41;           // per V-dimension
  double refine_step_tol = 1e-13; // pattern search terminal step
  double value_tol = 1e-6;        // membership band for the minimizer set
  double cluster_radius = 1e-4;   // minimizer clustering radius
  double refine_band = 1e-3;      // grid band fed to the refiner
};

struct SolverLog {
  int grid_per_dim = 0;
  long evals = 0;
  int refine_iterations = 0;
  double final_step = 0.0;
};

/// One evaluation of the localized U-Lagrangian: value, minimizer cluster
/// representatives (V-coordinates), and solver diagnostics.
struct ULagEval {
  VectorXd u;
  VectorXd gbar;
  double eps = 0.0;
  double value = 0.0;
  std::vector<VectorXd> minimizers;
  double max_cluster_diameter = 0.0;
  SolverLog log;
};

/// The localized U-Lagrangian
///   L(u) = inf { f(xbar + Ubar u + Vbar v) - <gbar, Vbar v> : ||Vbar v|| <= eps }
/// solved by a dense lattice followed by deterministic pattern-search
/// refinement. Valid for V-dimension <= 3 and eps < eps_bar.
class ULagrangian {
 public:
  ULagrangian(const Problem& problem, const UVFrame& frame, VectorXd gbar,
              double eps, SolveOptions opts = {});

  ULagEval evaluate(const VectorXd& u) const;
  double value(const VectorXd& u) const { return evaluate(u).value; }

  /// Central finite-difference gradient in U-coordinates.
  VectorXd gradient(const VectorXd& u, double h = 1e-5) const;
  VectorXd gradient_at_zero(double h = 1e-5) const {
    return gradient(VectorXd::Zero(frame_->u_dim()), h);
  }

  double eps() const { return eps_; }
  const VectorXd& gbar() const { return gbar_; }
  const UVFrame& frame() const { return *frame_; }
  const Problem& problem() const { return *problem_; }
  /// Inner objective at V-coordinates v for the given u.
  double objective(const VectorXd& u, const VectorXd& v) const;

 private:
  const Problem* problem_;
  const UVFrame* frame_;
  VectorXd gbar_;
  VectorXd gbar_v_;  // V-coordinates of gbar
  double eps_;
  SolveOptions opts_;
};

// Spec-level operations -------------------------------------------------------

ULagEval inner_minimize(const Problem& problem, const UVFrame& frame,
                        const VectorXd& u, const VectorXd& gbar, double eps,
                        SolveOptions opts = {});

/// Finite-difference gradient of L at u = 0; the strict-differentiability
/// contract is ||result - Ubar^T gbar|| <= 1e-5 (1 + ||gbar||).
VectorXd grad_L_at_zero(const Problem& problem, const UVFrame& frame,
                        const VectorXd& gbar, double eps);

/// Sampled check of L(u) >= f(xbar) + <gbar_u, u> - rho/2 ||u||^2 over the
/// ball of radius r = sqrt(eps_bar^2 - eps^2). Pass iff min slack >= -1e-8.
Certificate quadratic_lower_bound_check(const Problem& problem,
                                        const UVFrame& frame,
                                        const VectorXd& gbar, double eps,
                                        int n_samples, std::uint64_t seed,
                                        std::optional<double> rho = std::nullopt);

/// One tilt of the V-restriction: minimizer cluster of
/// f(xbar + Vbar v) - <gbar_v + s, v> over the eps-ball.
struct TiltSample {
  VectorXd s;
  std::vector<VectorXd> cluster;
  double cluster_diameter = 0.0;
};

/// Requires s + gbar_v in the V-projection of the eps-relative interior;
/// the tilt-stability contract is cluster == {0}.
TiltSample tilt_map(const Problem& problem, const UVFrame& frame,
                    const VectorXd& gbar, double eps, const VectorXd& s);

/// Verifies (s, 0) in {(g_u, g_v - gbar_v) : g in subdiff at the minimizer}
/// for s the finite-difference gradient of L at u and some minimizer v.
struct MarginalLink {
  VectorXd s;
  VectorXd v_hat;
  double membership_distance = 0.0;
  bool pass = false;
};

MarginalLink marginal_subgradient_link(const Problem& problem,
                                       const UVFrame& frame,
                                       const VectorXd& gbar, double eps,
                                       const VectorXd& u);

// Defaults and sampling --------------------------------------------------------

/// 0.5 * min(max feasible eps, eps_bar).
double default_eps(const Problem& problem, const UVFrame& frame);

/// The eps-relative interior of the subdifferential at the base point.
Polytope eps_relative_interior_at_base(const Problem& problem,
                                       const UVFrame& frame, double eps);

/// Centroid of the eps-relative-interior generators.
VectorXd default_gbar(const Problem& problem, const UVFrame& frame, double eps);

/// Deterministic interior samples of the eps-relative interior: centroid,
/// then generator mixtures pulled 10% toward the centroid.
std::vector<VectorXd> sample_eps_ri(const Problem& problem, const UVFrame& frame,
                                    double eps, int count, std::uint64_t seed);

/// r with r^2 + eps^2 = eps_bar^2 (the radius the quadratic bounds live on).
inline double track_radius(double eps_bar, double eps) {
  return std::sqrt(std::max(eps_bar * eps_bar - eps * eps, 0.0));
}

}  // namespace uvlag
