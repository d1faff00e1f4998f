#include "uvlag/ulag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace uvlag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Union-find clustering on a point list with a link radius; returns the
// cluster id per point.
std::vector<int> cluster_points(const std::vector<VectorXd>& pts, double radius) {
  const int k = static_cast<int>(pts.size());
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if ((pts[i] - pts[j]).norm() <= radius) parent[find(i)] = find(j);
  std::vector<int> root(k);
  for (int i = 0; i < k; ++i) root[i] = find(i);
  return root;
}

}  // namespace

ULagrangian::ULagrangian(const Problem& problem, const UVFrame& frame,
                         VectorXd gbar, double eps, SolveOptions opts)
    : problem_(&problem),
      frame_(&frame),
      gbar_(std::move(gbar)),
      eps_(eps),
      opts_(opts) {
  if (frame.v_dim() > 3)
    throw PreconditionViolation("inner minimization supports dim V <= 3");
  if (!(eps > 0.0))
    throw PreconditionViolation("eps must be positive");
  if (!(eps < problem.eps_bar()))
    throw PreconditionViolation("eps must be strictly below eps_bar");
  gbar_v_ = frame.v_coords(gbar_);
}

double ULagrangian::objective(const VectorXd& u, const VectorXd& v) const {
  const VectorXd x = frame_->point(u, v);
  return problem_->eval(x) - gbar_v_.dot(v);
}

ULagEval ULagrangian::evaluate(const VectorXd& u) const {
  if (u.size() != frame_->u_dim())
    throw PreconditionViolation("u must live in U-coordinates");
  const int p = frame_->v_dim();
  ULagEval out;
  out.u = u;
  out.gbar = gbar_;
  out.eps = eps_;
  out.log.grid_per_dim = opts_.grid_points;

  if (p == 0) {
    out.value = objective(u, VectorXd(0));
    out.minimizers = {VectorXd(0)};
    out.log.evals = 1;
    return out;
  }

  const int N = opts_.grid_points;
  const double spacing = 2.0 * eps_ / static_cast<double>(N - 1);
  long total = 1;
  for (int d = 0; d < p; ++d) total *= N;

  // stage 1: dense lattice over the eps-ball (orthonormal Vbar, so the ball
  // in coordinates is the Euclidean one)
  std::vector<VectorXd> grid_pts;
  std::vector<double> grid_vals;
  grid_pts.reserve(total);
  grid_vals.reserve(total);
  double best_grid = kInf;
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    VectorXd v(p);
    for (int d = p - 1; d >= 0; --d) {
      const int i = static_cast<int>(rem % N);
      rem /= N;
      v[d] = -eps_ + spacing * i;
    }
    if (v.norm() > eps_ + 1e-15) continue;
    const double val = objective(u, v);
    grid_pts.push_back(v);
    grid_vals.push_back(val);
    ++out.log.evals;
    if (val < best_grid) best_grid = val;
  }
  if (!std::isfinite(best_grid)) {
    // u outside dom L: empty minimizer set
    out.value = kInf;
    return out;
  }

  // stage 2: cluster the near-best lattice points and refine one
  // representative per cluster by coordinate pattern search
  std::vector<int> cand_idx;
  for (size_t i = 0; i < grid_vals.size(); ++i)
    if (grid_vals[i] <= best_grid + opts_.refine_band)
      cand_idx.push_back(static_cast<int>(i));
  std::vector<VectorXd> cand_pts;
  for (int i : cand_idx) cand_pts.push_back(grid_pts[i]);
  const auto roots = cluster_points(cand_pts, 2.5 * spacing);
  std::vector<int> reps;  // candidate-list positions
  {
    std::vector<int> best_for_root(cand_idx.size(), -1);
    for (size_t i = 0; i < cand_idx.size(); ++i) {
      int& slot = best_for_root[roots[i]];
      // lowest value wins; lattice order breaks ties (strict <)
      if (slot < 0 || grid_vals[cand_idx[i]] < grid_vals[cand_idx[slot]])
        slot = static_cast<int>(i);
    }
    for (size_t i = 0; i < cand_idx.size(); ++i)
      if (roots[i] == static_cast<int>(i)) reps.push_back(best_for_root[i]);
  }

  std::vector<VectorXd> refined_pts;
  std::vector<double> refined_vals;
  for (int rep : reps) {
    VectorXd v = cand_pts[rep];
    double val = grid_vals[cand_idx[rep]];
    double step = spacing;
    while (step >= opts_.refine_step_tol) {
      int best_dir = -1;
      double best_val = val;
      VectorXd best_pt = v;
      for (int d = 0; d < p; ++d) {
        for (double sgn : {1.0, -1.0}) {
          VectorXd w = v;
          w[d] += sgn * step;
          if (w.norm() > eps_ + 1e-15) continue;
          const double fv = objective(u, w);
          ++out.log.evals;
          if (fv < best_val) {
            best_val = fv;
            best_pt = w;
            best_dir = d;
          }
        }
      }
      if (best_dir >= 0) {
        v = best_pt;
        val = best_val;
      } else {
        step *= 0.5;
      }
      ++out.log.refine_iterations;
      out.log.final_step = step;
    }
    refined_pts.push_back(v);
    refined_vals.push_back(val);
  }

  // stage 3: pool lattice + refined points, keep everything within the value
  // band of the best, cluster with the reporting radius
  double best = best_grid;
  for (double v : refined_vals) best = std::min(best, v);
  out.value = best;

  std::vector<VectorXd> pool_pts;
  std::vector<double> pool_vals;
  for (size_t i = 0; i < grid_pts.size(); ++i) {
    if (grid_vals[i] <= best + opts_.value_tol) {
      pool_pts.push_back(grid_pts[i]);
      pool_vals.push_back(grid_vals[i]);
    }
  }
  for (size_t i = 0; i < refined_pts.size(); ++i) {
    if (refined_vals[i] <= best + opts_.value_tol) {
      pool_pts.push_back(refined_pts[i]);
      pool_vals.push_back(refined_vals[i]);
    }
  }
  const auto pool_roots = cluster_points(pool_pts, opts_.cluster_radius);
  std::vector<int> cluster_rep(pool_pts.size(), -1);
  for (size_t i = 0; i < pool_pts.size(); ++i) {
    int& slot = cluster_rep[pool_roots[i]];
    if (slot < 0 || pool_vals[i] < pool_vals[slot]) slot = static_cast<int>(i);
  }
  out.max_cluster_diameter = 0.0;
  for (size_t i = 0; i < pool_pts.size(); ++i)
    for (size_t j = i + 1; j < pool_pts.size(); ++j)
      if (pool_roots[i] == pool_roots[j])
        out.max_cluster_diameter = std::max(
            out.max_cluster_diameter, (pool_pts[i] - pool_pts[j]).norm());
  for (size_t i = 0; i < pool_pts.size(); ++i)
    if (pool_roots[i] == static_cast<int>(i))
      out.minimizers.push_back(pool_pts[cluster_rep[i]]);
  std::sort(out.minimizers.begin(), out.minimizers.end(),
            [](const VectorXd& a, const VectorXd& b) {
              for (int i = 0; i < a.size(); ++i) {
                if (a[i] < b[i] - 1e-15) return true;
                if (a[i] > b[i] + 1e-15) return false;
              }
              return false;
            });
  out.minimizers.erase(
      std::unique(out.minimizers.begin(), out.minimizers.end(),
                  [](const VectorXd& a, const VectorXd& b) {
                    return (a - b).norm() <= 1e-15;
                  }),
      out.minimizers.end());

  // feasibility and the v = 0 upper bound
  for (const auto& v : out.minimizers)
    if ((frame_->Vbar() * v).norm() > eps_ + 1e-12)
      throw InvariantViolation("reported minimizer leaves the eps-ball");
  const double at_zero = objective(u, VectorXd::Zero(p));
  if (out.value > at_zero + 1e-12)
    throw InvariantViolation("L exceeds its v = 0 upper bound");
  return out;
}

VectorXd ULagrangian::gradient(const VectorXd& u, double h) const {
  VectorXd g(frame_->u_dim());
  for (int i = 0; i < frame_->u_dim(); ++i) {
    VectorXd up = u, um = u;
    up[i] += h;
    um[i] -= h;
    g[i] = (evaluate(up).value - evaluate(um).value) / (2.0 * h);
  }
  return g;
}

ULagEval inner_minimize(const Problem& problem, const UVFrame& frame,
                        const VectorXd& u, const VectorXd& gbar, double eps,
                        SolveOptions opts) {
  return ULagrangian(problem, frame, gbar, eps, opts).evaluate(u);
}

VectorXd grad_L_at_zero(const Problem& problem, const UVFrame& frame,
                        const VectorXd& gbar, double eps) {
  return ULagrangian(problem, frame, gbar, eps).gradient_at_zero();
}

Certificate quadratic_lower_bound_check(const Problem& problem,
                                        const UVFrame& frame,
                                        const VectorXd& gbar, double eps,
                                        int n_samples, std::uint64_t seed,
                                        std::optional<double> rho) {
  const double use_rho = rho.value_or(problem.rho());
  const double r = track_radius(problem.eps_bar(), eps);
  const ULagrangian L(problem, frame, gbar, eps);
  const VectorXd gbar_u = frame.u_coords(gbar);
  const double f0 = problem.eval(problem.base_point());

  Certificate cert;
  cert.kind = CertKind::QuadraticLowerBound;
  cert.params = {{"problem", problem.name()}, {"eps", eps},  {"rho", use_rho},
                 {"r", r},                    {"samples", n_samples},
                 {"seed", seed}};
  const int m = frame.u_dim();
  double min_slack = kInf;
  VectorXd worst = VectorXd::Zero(m);
  HaltonSampler halton(std::max(m, 1), seed);
  for (int i = 0; i < n_samples; ++i) {
    VectorXd u = (i == 0 || m == 0) ? VectorXd::Zero(m)
                                    : halton.next_in_ball(VectorXd::Zero(m), r);
    const double bound = f0 + gbar_u.dot(u) - 0.5 * use_rho * u.squaredNorm();
    const double slack = L.value(u) - bound;
    ++cert.samples_used;
    if (slack < min_slack) {
      min_slack = slack;
      worst = u;
    }
    if (m == 0) break;  // only u = 0 exists
  }
  cert.max_violation = std::max(0.0, -min_slack);
  cert.params["min_slack"] = min_slack;
  if (min_slack < -1e-8) {
    cert.witness = {{"u", std::vector<double>(worst.data(), worst.data() + m)},
                    {"slack", min_slack}};
  }
  return finalize_certificate(std::move(cert), 1e-8);
}

TiltSample tilt_map(const Problem& problem, const UVFrame& frame,
                    const VectorXd& gbar, double eps, const VectorXd& s) {
  const int p = frame.v_dim();
  if (s.size() != p)
    throw PreconditionViolation("tilt vector must live in V-coordinates");
  TiltSample out;
  out.s = s;
  if (p == 0) {
    out.cluster = {VectorXd(0)};
    return out;
  }
  // membership of gbar_v + s in the V-projection of the eps-relative interior
  const Polytope ri = eps_relative_interior_at_base(problem, frame, eps);
  std::vector<VectorXd> proj;
  for (const auto& g : ri.generators()) proj.push_back(frame.v_coords(g));
  const Polytope projected(std::move(proj));
  const VectorXd target = frame.v_coords(gbar) + s;
  if (projected.distance(target) > 1e-9)
    throw PreconditionViolation(
        "tilt outside E: gbar_v + s leaves the projected eps-relative interior");
  // tilted linear term: replace gbar by gbar + Vbar s
  const VectorXd tilted = gbar + frame.Vbar() * s;
  const ULagEval eval = inner_minimize(problem, frame,
                                       VectorXd::Zero(frame.u_dim()), tilted,
                                       eps);
  out.cluster = eval.minimizers;
  out.cluster_diameter = eval.max_cluster_diameter;
  return out;
}

MarginalLink marginal_subgradient_link(const Problem& problem,
                                       const UVFrame& frame,
                                       const VectorXd& gbar, double eps,
                                       const VectorXd& u) {
  const ULagrangian L(problem, frame, gbar, eps);
  MarginalLink out;
  out.s = L.gradient(u);
  const ULagEval eval = L.evaluate(u);
  const VectorXd gbar_v = frame.v_coords(gbar);
  const int m = frame.u_dim(), p = frame.v_dim();
  out.membership_distance = kInf;
  for (const auto& v : eval.minimizers) {
    if (p > 0 && (frame.Vbar() * v).norm() >= eps - 1e-9)
      continue;  // the product form needs an interior minimizer
    const SubdiffResult sd =
        problem.limiting_subdifferential(frame.point(u, v));
    std::vector<VectorXd> pairs;
    for (const auto& g : sd.polytope.generators()) {
      VectorXd q(m + p);
      q.head(m) = frame.u_coords(g);
      q.tail(p) = frame.v_coords(g) - gbar_v;
      pairs.push_back(q);
    }
    const Polytope transformed(std::move(pairs));
    VectorXd target(m + p);
    target.head(m) = out.s;
    target.tail(p).setZero();
    const double d = transformed.distance(target);
    if (d < out.membership_distance) {
      out.membership_distance = d;
      out.v_hat = v;
    }
  }
  out.pass = out.membership_distance <= 1e-5;
  return out;
}

double default_eps(const Problem& problem, const UVFrame& frame) {
  Polytope sub = frame.subdiff();
  sub.synthesize_facets();
  const double max_eps = max_feasible_epsilon(sub, frame.V());
  if (!std::isfinite(max_eps)) return 0.5 * problem.eps_bar();
  return 0.5 * std::min(max_eps, problem.eps_bar());
}

Polytope eps_relative_interior_at_base(const Problem& problem,
                                       const UVFrame& frame, double eps) {
  (void)problem;
  Polytope sub = frame.subdiff();
  sub.synthesize_facets();
  return epsilon_relative_interior(sub, frame.V(), eps);
}

VectorXd default_gbar(const Problem& problem, const UVFrame& frame,
                      double eps) {
  return eps_relative_interior_at_base(problem, frame, eps).centroid();
}

std::vector<VectorXd> sample_eps_ri(const Problem& problem,
                                    const UVFrame& frame, double eps, int count,
                                    std::uint64_t seed) {
  const Polytope ri = eps_relative_interior_at_base(problem, frame, eps);
  Rng rng(seed);
  return sample_hull(ri, count, rng, 0.1);
}

}  // namespace uvlag
