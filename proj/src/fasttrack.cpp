#include "uvlag/fasttrack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uvlag/certify.hpp"

namespace uvlag {

namespace {

std::vector<double> to_std(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::vector<VectorXd> default_u_grid(int u_dim, double radius, int points) {
  std::vector<VectorXd> grid;
  if (u_dim == 0) {
    grid.push_back(VectorXd(0));
    return grid;
  }
  // axis grids per U-dimension, symmetric about 0
  for (int d = 0; d < u_dim; ++d) {
    for (int i = 0; i < points; ++i) {
      const double t = -radius + 2.0 * radius * i / static_cast<double>(points - 1);
      VectorXd u = VectorXd::Zero(u_dim);
      u[d] = t;
      grid.push_back(u);
    }
  }
  std::sort(grid.begin(), grid.end(), [](const VectorXd& a, const VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < b[i] - 1e-15) return true;
      if (a[i] > b[i] + 1e-15) return false;
    }
    return false;
  });
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](const VectorXd& a, const VectorXd& b) {
                           return (a - b).norm() <= 1e-15;
                         }),
             grid.end());
  return grid;
}

TrajectoryTrace trace_fast_track(const Problem& problem, const UVFrame& frame,
                                 double eps,
                                 const std::vector<VectorXd>& u_grid,
                                 const std::vector<VectorXd>& gbar_samples) {
  if (gbar_samples.empty())
    throw PreconditionViolation("trace requires at least one gbar sample");
  TrajectoryTrace trace;
  trace.u_grid = u_grid;
  trace.gbar_samples = gbar_samples;
  trace.eps = eps;
  trace.L_values.assign(gbar_samples.size(), {});

  std::vector<ULagrangian> solvers;
  solvers.reserve(gbar_samples.size());
  for (const auto& g : gbar_samples)
    solvers.emplace_back(problem, frame, g, eps);

  for (const auto& u : u_grid) {
    // selection from the first gbar; single cluster required
    const ULagEval ref = solvers[0].evaluate(u);
    if (ref.minimizers.size() != 1) {
      std::string msg = "minimizer set is not a single cluster at a grid point (" +
                        std::to_string(ref.minimizers.size()) + " clusters)";
      throw MultiClusterMinimizer(msg);
    }
    const VectorXd v = ref.minimizers[0];
    trace.v_of_u.push_back(v);
    for (size_t gi = 0; gi < gbar_samples.size(); ++gi) {
      const ULagEval ev = (gi == 0) ? ref : solvers[gi].evaluate(u);
      if (ev.minimizers.size() != 1)
        throw MultiClusterMinimizer(
            "minimizer set is not a single cluster for a sampled gbar");
      trace.L_values[gi].push_back(ev.value);
      // membership of the common selection in W(u; gbar_i)
      const double val_at_v = solvers[gi].objective(u, v);
      if (val_at_v > ev.value + 1e-6)
        throw InvariantViolation(
            "selection is not a minimizer for a sampled gbar (value gap " +
            std::to_string(val_at_v - ev.value) + ")");
      trace.max_selection_spread =
          std::max(trace.max_selection_spread, (ev.minimizers[0] - v).norm());
    }
  }
  return trace;
}

SmoothSelectionDiagnostics check_smooth_selection(const Problem& problem,
                                                  const UVFrame& frame,
                                                  double eps) {
  const int m = frame.u_dim();
  const VectorXd gbar = default_gbar(problem, frame, eps);
  const ULagrangian L(problem, frame, gbar, eps);
  auto select = [&](const VectorXd& u) {
    const ULagEval ev = L.evaluate(u);
    if (ev.minimizers.size() != 1)
      throw MultiClusterMinimizer("selection undefined: multiple clusters");
    return ev.minimizers[0];
  };

  SmoothSelectionDiagnostics diag;
  const int p = frame.v_dim();
  diag.jacobian0 = MatrixXd::Zero(p, std::max(m, 0));
  const double h = 1e-4;
  for (int d = 0; d < m; ++d) {
    const VectorXd vp = select((h * VectorXd::Unit(m, d)).eval());
    const VectorXd vm = select((-h * VectorXd::Unit(m, d)).eval());
    if (p > 0) diag.jacobian0.col(d) = (vp - vm) / (2.0 * h);
  }
  diag.jacobian_norm = (p == 0 || m == 0) ? 0.0 : diag.jacobian0.norm();

  auto max_ratio = [&](double radius) {
    if (m == 0) return 0.0;
    double r = 0.0;
    for (int d = 0; d < m; ++d) {
      for (double sgn : {1.0, -1.0}) {
        const VectorXd v = select((sgn * radius * VectorXd::Unit(m, d)).eval());
        r = std::max(r, v.norm() / radius);
      }
    }
    return r;
  };
  diag.ratio_large = max_ratio(1e-2);
  diag.ratio_small = max_ratio(1e-3);
  diag.pass = diag.jacobian_norm <= 1e-4 &&
              diag.ratio_small <= diag.ratio_large + 1e-12 &&
              diag.ratio_small <= 1e-2;
  return diag;
}

ManifoldModel::ManifoldModel(const Problem& problem, const UVFrame& frame,
                             double eps, Selection selection,
                             double chart_radius, std::string label)
    : problem_(&problem),
      frame_(&frame),
      eps_(eps),
      selection_(std::move(selection)),
      chart_radius_(chart_radius),
      label_(std::move(label)) {}

ManifoldModel ManifoldModel::from_solver(const Problem& problem,
                                         const UVFrame& frame, double eps,
                                         const VectorXd& gbar,
                                         double chart_radius,
                                         std::string label) {
  auto solver = std::make_shared<ULagrangian>(problem, frame, gbar, eps);
  Selection sel = [solver](const VectorXd& u) {
    const ULagEval ev = solver->evaluate(u);
    if (ev.minimizers.size() != 1)
      throw MultiClusterMinimizer("selection undefined: multiple clusters");
    return ev.minimizers[0];
  };
  return ManifoldModel(problem, frame, eps, std::move(sel), chart_radius,
                       std::move(label));
}

ManifoldModel ManifoldModel::from_selection(const Problem& problem,
                                            const UVFrame& frame, double eps,
                                            Selection selection,
                                            double chart_radius,
                                            std::string label) {
  return ManifoldModel(problem, frame, eps, std::move(selection), chart_radius,
                       std::move(label));
}

VectorXd ManifoldModel::G(const VectorXd& u) const {
  return frame_->point(u, selection_(u));
}

MatrixXd ManifoldModel::jacobian_at_zero() const {
  const int m = frame_->u_dim();
  const int n = frame_->ambient_dim();
  const double h = 1e-5;
  MatrixXd jac(n, m);
  for (int d = 0; d < m; ++d) {
    const VectorXd gp = G((h * VectorXd::Unit(m, d)).eval());
    const VectorXd gm = G((-h * VectorXd::Unit(m, d)).eval());
    jac.col(d) = (gp - gm) / (2.0 * h);
  }
  if (m > 0) {
    Eigen::JacobiSVD<MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    if (sv.minCoeff() < 1e-6 * std::max(sv.maxCoeff(), 1.0))
      throw InvariantViolation("manifold chart Jacobian is rank deficient");
  }
  return jac;
}

Subspace ManifoldModel::tangent_at_zero() const {
  const MatrixXd jac = jacobian_at_zero();
  if (frame_->u_dim() == 0) return Subspace::zero(frame_->ambient_dim());
  return Subspace::from_span(jac);
}

Subspace ManifoldModel::normal_at_zero() const {
  return tangent_at_zero().orthogonal_complement();
}

Subspace tangent_space(const ManifoldModel& model) {
  return model.tangent_at_zero();
}

Certificate inner_semicontinuity_check(const ManifoldModel& model,
                                       const std::vector<VectorXd>& targets,
                                       int K, std::optional<VectorXd> u0_opt) {
  const Problem& problem = model.problem();
  const int m = model.frame().u_dim();
  const VectorXd u0 = u0_opt.value_or(
      m > 0 ? (0.2 * VectorXd::Unit(m, 0)).eval() : VectorXd(0));

  Certificate cert;
  cert.kind = CertKind::InnerSemicontinuity;
  cert.params = {{"problem", problem.name()},
                 {"manifold", model.label()},
                 {"K", K},
                 {"targets", static_cast<long>(targets.size())}};
  double worst_final = 0.0;
  bool monotone = true;
  double plateau_value = 0.0;
  json witness;
  json distances = json::array();
  for (const auto& target : targets) {
    double prev = std::numeric_limits<double>::infinity();
    double final_d = 0.0;
    int flat_steps = 0;
    VectorXd nearest = target;
    VectorXd plateau_g = target;
    json seq = json::array();
    for (int k = 1; k <= K; ++k) {
      const VectorXd u = std::pow(0.5, k) * u0;
      const VectorXd x = model.G(u);
      const SubdiffResult sd = problem.limiting_subdifferential(x);
      const VectorXd g = sd.polytope.project(target);
      const double d = (g - target).norm();
      seq.push_back(d);
      ++cert.samples_used;
      if (k > 3) {
        if (d > prev + 1e-12) monotone = false;
        // a stalled sequence above tolerance never converges; the late-k
        // collapse of active-set gaps below measurement precision must not
        // mask it
        if (std::abs(d - prev) <= 1e-8 * std::max(1.0, d) && d > 1e-4) {
          if (++flat_steps >= 3 && d > plateau_value) {
            plateau_value = d;
            plateau_g = g;
          }
        } else {
          flat_steps = 0;
        }
      }
      prev = d;
      final_d = d;
      nearest = g;
    }
    distances.push_back({{"target", to_std(target)}, {"distances", seq}});
    const double score = std::max(final_d, plateau_value);
    if (score > worst_final) {
      worst_final = score;
      witness = {{"target", to_std(target)},
                 {"attained_limit",
                  to_std(plateau_value > final_d ? plateau_g : nearest)},
                 {"final_distance", final_d},
                 {"plateau", plateau_value}};
    }
  }
  cert.params["sequences"] = distances;
  cert.max_violation = monotone ? worst_final : std::max(worst_final, 1.0);
  if (cert.max_violation > 1e-4) cert.witness = witness;
  return finalize_certificate(std::move(cert), 1e-4);
}

std::string PartialSmoothnessVerdict::failing_part() const {
  if (!smooth_agreement) return "i";
  if (!regularity) return "ii";
  if (!normal_matches_V) return "iii";
  if (!inner_semicontinuous) return "iv";
  return "";
}

namespace {

// Max residual of a least-squares polynomial fit of total degree <= 4 to the
// values on the grid (m <= 2).
double poly_fit_residual(const std::vector<VectorXd>& us,
                         const std::vector<double>& vals, int m) {
  if (m == 0) {
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double r = 0.0;
    for (double v : vals) r = std::max(r, std::abs(v - mean));
    return r;
  }
  std::vector<std::pair<int, int>> powers;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4 - a; ++b)
      powers.emplace_back(a, b);
  const int cols = static_cast<int>(powers.size());
  MatrixXd A(static_cast<int>(us.size()), cols);
  VectorXd y(static_cast<int>(us.size()));
  for (size_t i = 0; i < us.size(); ++i) {
    const double x1 = us[i][0];
    const double x2 = (m > 1) ? us[i][1] : 0.0;
    for (int c = 0; c < cols; ++c) {
      if (m == 1 && powers[c].second > 0) {
        A(static_cast<int>(i), c) = 0.0;
      } else {
        A(static_cast<int>(i), c) =
            std::pow(x1, powers[c].first) * std::pow(x2, powers[c].second);
      }
    }
    y[static_cast<int>(i)] = vals[i];
  }
  const VectorXd coef = A.completeOrthogonalDecomposition().solve(y);
  return (A * coef - y).cwiseAbs().maxCoeff();
}

}  // namespace

PartialSmoothnessVerdict partial_smoothness_battery(const ManifoldModel& model,
                                                    int grid_points) {
  const Problem& problem = model.problem();
  const UVFrame& frame = model.frame();
  const int m = frame.u_dim();
  if (m > 2)
    throw PreconditionViolation("battery supports U-dimension <= 2");
  PartialSmoothnessVerdict verdict;

  // shared grid of manifold points
  std::vector<VectorXd> us;
  if (m == 0) {
    us.push_back(VectorXd(0));
  } else {
    const double radius = model.chart_radius();
    for (int d = 0; d < m; ++d)
      for (int i = 0; i < grid_points; ++i) {
        const double t =
            -radius + 2.0 * radius * i / static_cast<double>(grid_points - 1);
        VectorXd u = VectorXd::Zero(m);
        u[d] = t;
        us.push_back(u);
      }
  }
  std::vector<VectorXd> pts;
  std::vector<double> fvals;
  for (const auto& u : us) {
    pts.push_back(model.G(u));
    fvals.push_back(problem.eval(pts.back()));
  }

  // (i) smooth agreement: degree-4 fit of f on the manifold
  verdict.fit_residual = poly_fit_residual(us, fvals, m);
  verdict.smooth_agreement = verdict.fit_residual <= 1e-8;

  // (ii) regularity at sampled manifold points
  const Certificate reg =
      certify_regular_equals_limiting(problem, pts, CertKind::AssumptionA7);
  verdict.regularity = reg.pass;
  verdict.regularity_violation = reg.max_violation;
  if (!reg.pass && reg.witness) verdict.witness = *reg.witness;

  // (iii) normal space equals V
  const Subspace normal = model.normal_at_zero();
  verdict.normal_angle = max_principal_angle(normal, frame.V());
  verdict.normal_matches_V =
      normal.dim() == frame.v_dim() && verdict.normal_angle <= 1e-4;

  // (iv) inner semicontinuity toward generators and the centroid of the
  // eps-relative interior
  std::vector<VectorXd> targets = frame.subdiff().generators();
  targets.push_back(default_gbar(problem, frame, model.eps()));
  verdict.isc = inner_semicontinuity_check(model, targets);
  verdict.inner_semicontinuous = verdict.isc.pass;
  if (!verdict.isc.pass && verdict.isc.witness) verdict.witness = *verdict.isc.witness;
  return verdict;
}

C1BatteryVerdict c1_fast_track_battery(const Problem& problem,
                                       const UVFrame& frame, double eps,
                                       const TrajectoryTrace& trace) {
  if (trace.gbar_samples.size() < 2)
    throw PreconditionViolation("battery needs at least two gbar samples");
  C1BatteryVerdict verdict;
  const int m = frame.u_dim();

  // gradient-jump modulus along the grid (1-D grids only; m = 0 is vacuous)
  if (m == 1 && trace.u_grid.size() >= 2) {
    double spacing = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < trace.u_grid.size(); ++i)
      spacing = std::min(spacing,
                         std::abs(trace.u_grid[i][0] - trace.u_grid[i - 1][0]));
    verdict.jump_bound = 10.0 * spacing * 10.0;
    for (const auto& gbar : trace.gbar_samples) {
      const ULagrangian L(problem, frame, gbar, eps);
      std::vector<double> grads;
      for (const auto& u : trace.u_grid) grads.push_back(L.gradient(u)[0]);
      for (size_t i = 1; i < grads.size(); ++i)
        verdict.max_gradient_jump =
            std::max(verdict.max_gradient_jump, std::abs(grads[i] - grads[i - 1]));
    }
  } else {
    verdict.jump_bound = 1.0;
  }

  // affine relation between the U-Lagrangians of two tilt parameters
  double max_idviol = 0.0;
  json witness = json(nullptr);
  for (size_t a = 0; a < trace.gbar_samples.size(); ++a) {
    for (size_t b = 0; b < trace.gbar_samples.size(); ++b) {
      if (a == b) continue;
      const VectorXd ga_v = frame.v_coords(trace.gbar_samples[a]);
      const VectorXd gb_v = frame.v_coords(trace.gbar_samples[b]);
      for (size_t i = 0; i < trace.u_grid.size(); ++i) {
        const double lhs = trace.L_values[a][i];
        const double rhs =
            trace.L_values[b][i] - (ga_v - gb_v).dot(trace.v_of_u[i]);
        const double err = std::abs(lhs - rhs);
        if (err > max_idviol) {
          max_idviol = err;
          if (err > 1e-8)
            witness = {{"u", to_std(trace.u_grid[i])},
                       {"gbar", to_std(trace.gbar_samples[a])},
                       {"ghat", to_std(trace.gbar_samples[b])},
                       {"violation", err}};
        }
      }
    }
  }
  verdict.max_identity_violation = max_idviol;
  verdict.witness = witness;
  verdict.pass = verdict.max_gradient_jump <= verdict.jump_bound &&
                 verdict.max_identity_violation <= 1e-8;
  return verdict;
}

}  // namespace uvlag
