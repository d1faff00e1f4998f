#pragma once

#include "uvlag/certificate.hpp"
#include "uvlag/ulag.hpp"

namespace uvlag {

/// Minimizer selection traced on a U-grid, with membership of the selection
/// in the minimizer set of every sampled gbar (the common-intersection
/// requirement of a fast track).
struct TrajectoryTrace {
  std::vector<VectorXd> u_grid;            // U-coordinates
  std::vector<VectorXd> v_of_u;            // selected V-coordinates
  std::vector<VectorXd> gbar_samples;      // ambient subgradients
  std::vector<std::vector<double>> L_values;  // [gbar][grid point]
  double eps = 0.0;
  double max_selection_spread = 0.0;  // across gbar choices, on the grid
};

/// Symmetric default grid (21 points per U-dimension over +/- 0.2).
std::vector<VectorXd> default_u_grid(int u_dim, double radius = 0.2,
                                     int points = 21);

/// Trace the selection on the grid; requires a single minimizer cluster at
/// every grid point (throws MultiClusterMinimizer otherwise) and membership
/// of the selection in W(u) for every sampled gbar within the value band.
TrajectoryTrace trace_fast_track(const Problem& problem, const UVFrame& frame,
                                 double eps,
                                 const std::vector<VectorXd>& u_grid,
                                 const std::vector<VectorXd>& gbar_samples);

struct SmoothSelectionDiagnostics {
  MatrixXd jacobian0;        // FD Jacobian of v at 0
  double jacobian_norm = 0.0;
  double ratio_large = 0.0;  // ||v(u)||/||u|| at ||u|| = 1e-2
  double ratio_small = 0.0;  // at ||u|| = 1e-3
  bool pass = false;
};

/// Checks the first-order flatness of the selection at 0:
/// FD Jacobian (step 1e-4) below 1e-4, and the o(||u||) ratio test.
SmoothSelectionDiagnostics check_smooth_selection(const Problem& problem,
                                                  const UVFrame& frame,
                                                  double eps);

/// Single-chart manifold model x = G(u) = xbar + Ubar u + Vbar v(u) from an
/// explicit selection map (traced from the solver or closed-form).
class ManifoldModel {
 public:
  using Selection = std::function<VectorXd(const VectorXd&)>;

  static ManifoldModel from_solver(const Problem& problem, const UVFrame& frame,
                                   double eps, const VectorXd& gbar,
                                   double chart_radius, std::string label);
  static ManifoldModel from_selection(const Problem& problem,
                                      const UVFrame& frame, double eps,
                                      Selection selection, double chart_radius,
                                      std::string label);

  VectorXd G(const VectorXd& u) const;
  VectorXd selection(const VectorXd& u) const { return selection_(u); }

  /// FD Jacobian of G at 0 (step 1e-5); throws on column-rank deficiency.
  MatrixXd jacobian_at_zero() const;
  Subspace tangent_at_zero() const;
  Subspace normal_at_zero() const;

  const Problem& problem() const { return *problem_; }
  const UVFrame& frame() const { return *frame_; }
  double eps() const { return eps_; }
  double chart_radius() const { return chart_radius_; }
  const std::string& label() const { return label_; }

 private:
  ManifoldModel(const Problem& problem, const UVFrame& frame, double eps,
                Selection selection, double chart_radius, std::string label);
  const Problem* problem_;
  const UVFrame* frame_;
  double eps_;
  Selection selection_;
  double chart_radius_;
  std::string label_;
};

/// Column space of the FD Jacobian of G at 0; the fast-track contract is
/// principal angles to frame.U below 1e-4.
Subspace tangent_space(const ManifoldModel& model);

/// Inner semicontinuity of the subdifferential along the manifold: for each
/// target subgradient, the nearest subgradient at x_k = G(2^-k u0) must
/// approach it (nonincreasing after k = 3, final distance <= 1e-4).
Certificate inner_semicontinuity_check(const ManifoldModel& model,
                                       const std::vector<VectorXd>& targets,
                                       int K = 20,
                                       std::optional<VectorXd> u0 = std::nullopt);

/// The four-part partial-smoothness battery: (i) smooth agreement of f on the
/// manifold (degree-4 fit residual <= 1e-8); (ii) regular = limiting at
/// sampled manifold points; (iii) normal space equals V (<= 1e-4);
/// (iv) inner semicontinuity.
struct PartialSmoothnessVerdict {
  bool smooth_agreement = false;
  double fit_residual = 0.0;
  bool regularity = false;
  double regularity_violation = 0.0;
  bool normal_matches_V = false;
  double normal_angle = 0.0;
  bool inner_semicontinuous = false;
  Certificate isc;
  json witness = json(nullptr);

  bool pass() const {
    return smooth_agreement && regularity && normal_matches_V &&
           inner_semicontinuous;
  }
  std::string failing_part() const;
};

PartialSmoothnessVerdict partial_smoothness_battery(const ManifoldModel& model,
                                                    int grid_points = 21);

/// C1 surrogate battery: finite-difference gradient jumps of L along the
/// grid stay below 10 * spacing * curvature bound 10, and the affine
/// relation L(u; g) = L(u; g') - <g_v - g'_v, v(u)> holds to 1e-8 pairwise.
struct C1BatteryVerdict {
  double max_gradient_jump = 0.0;
  double jump_bound = 0.0;
  double max_identity_violation = 0.0;
  bool pass = false;
  json witness = json(nullptr);
};

C1BatteryVerdict c1_fast_track_battery(const Problem& problem,
                                       const UVFrame& frame, double eps,
                                       const TrajectoryTrace& trace);

}  // namespace uvlag
