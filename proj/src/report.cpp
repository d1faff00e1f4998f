#include "uvlag/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "uvlag/certify.hpp"
#include "uvlag/fasttrack.hpp"
#include "uvlag/oracle.hpp"
#include "uvlag/ulag.hpp"

namespace uvlag {

namespace {

std::vector<double> to_std(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

struct CheckContext {
  const RunConfig* config;
  std::vector<CheckRecord>* records;

  void add(CheckRecord rec, const std::function<void(CheckRecord&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(rec);
    } catch (const std::exception& e) {
      rec.pass = false;
      rec.witness = {{"error", e.what()}};
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    records->push_back(std::move(rec));
  }
};

struct ProblemEnv {
  const Problem* problem;
  UVFrame frame;
  double eps;
  double eps_bar;
  VectorXd gbar;
  std::vector<VectorXd> gbar_samples;
};

ProblemEnv make_env(const std::string& name, const RunConfig& config) {
  const Problem& problem = catalog(name);
  UVFrame frame = build_frame(problem);
  const double eps = config.eps.value_or(default_eps(problem, frame));
  const double eps_bar = config.eps_bar.value_or(problem.eps_bar());
  VectorXd gbar = default_gbar(problem, frame, eps);
  auto samples = sample_eps_ri(problem, frame, eps, 3, config.seed);
  return ProblemEnv{&problem, std::move(frame), eps, eps_bar, std::move(gbar),
                    std::move(samples)};
}

void from_certificate(CheckRecord& rec, const Certificate& cert) {
  rec.pass = cert.pass;
  rec.max_violation = cert.max_violation;
  rec.witness = cert.witness.has_value() ? *cert.witness : json(nullptr);
  for (auto it = cert.params.begin(); it != cert.params.end(); ++it)
    rec.params[it.key()] = it.value();
  rec.params["kind"] = to_string(cert.kind);
  rec.params["samples_used"] = cert.samples_used;
  if (cert.samples_skipped > 0)
    rec.params["samples_skipped"] = cert.samples_skipped;
  rec.params["note"] = cert.note;
}

// ---------------------------------------------------------------------------
// Global checks
// ---------------------------------------------------------------------------

void check_ball_inclusion(CheckContext& ctx) {
  CheckRecord rec;
  rec.id = "ball-inclusion";
  rec.anchor = "Lemma 2.3";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const Certificate cert = ball_inclusion_check(
        VectorXd::Zero(2), 1.0, 0.3, ctx.config->samples, ctx.config->seed);
    from_certificate(r, cert);
  });
}

void check_proxreg_sets(CheckContext& ctx) {
  struct Case {
    std::string set;
    VectorXd xbar, wbar;
    double eps, rho;
  };
  const std::vector<Case> cases{
      {"halfspace", make_vector({0.0, 0.0}), make_vector({0.0, 1.0}), 0.5, 0.0},
      {"box", make_vector({0.0, 0.0}),
       make_vector({-M_SQRT1_2, -M_SQRT1_2}), 0.5, 0.0},
      {"disk-complement", make_vector({1.0, 0.0}), make_vector({-1.0, 0.0}),
       0.5, 1.0},
      {"parabola-epigraph", make_vector({0.0, 0.0}), make_vector({0.0, -1.0}),
       0.5, 0.0},
  };
  for (const auto& c : cases) {
    CheckRecord rec;
    rec.id = "proxreg-sets/" + c.set;
    rec.anchor = "Prop 2.2";
    ctx.add(std::move(rec), [&](CheckRecord& r) {
      const auto set = set_catalog(c.set);
      const Certificate cert = certify_set_prox_regularity(
          *set, c.xbar, c.wbar, c.eps, c.rho, ctx.config->samples,
          ctx.config->seed);
      from_certificate(r, cert);
    });
  }
}

void check_product_set(CheckContext& ctx) {
  {
    CheckRecord rec;
    rec.id = "product-set/disk-x-interval";
    rec.anchor = "Prop 2.4";
    ctx.add(std::move(rec), [&](CheckRecord& r) {
      const Certificate cert = certify_product_set(
          *make_disk_complement(), *make_interval01(), make_vector({1.0, 0.0}),
          make_vector({-1.0, 0.0}), make_vector({0.5}), make_vector({0.0}), 0.5,
          1.0, ctx.config->samples, ctx.config->seed);
      from_certificate(r, cert);
    });
  }
  {
    CheckRecord rec;
    rec.id = "product-set/disk-x-point";
    rec.anchor = "Prop 2.4";
    ctx.add(std::move(rec), [&](CheckRecord& r) {
      const Certificate cert = certify_product_set(
          *make_disk_complement(), *make_point_set(), make_vector({1.0, 0.0}),
          make_vector({-1.0, 0.0}), make_vector({0.0}), make_vector({0.0}), 0.5,
          1.0, ctx.config->samples, ctx.config->seed);
      from_certificate(r, cert);
    });
  }
}

void check_perturbation(CheckContext& ctx) {
  for (const double beta : {0.1, 0.49}) {
    CheckRecord rec;
    rec.id = "perturbation/disk-beta-" + std::to_string(beta).substr(0, 4);
    rec.anchor = "Prop after Lemma 2.3";
    ctx.add(std::move(rec), [&](CheckRecord& r) {
      const Certificate cert = certify_perturbation(
          *make_disk_complement(), make_vector({1.0, 0.0}),
          make_vector({-1.0, 0.0}), 0.5, 1.0, beta, ctx.config->samples,
          ctx.config->seed);
      from_certificate(r, cert);
    });
  }
}

void check_ulag_oracle(CheckContext& ctx) {
  CheckRecord rec;
  rec.id = "ulag-oracle";
  rec.anchor = "plumbing";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    Rng rng(ctx.config->seed + 11);
    double max_gap = 0.0;
    json worst = json(nullptr);
    int instances = 0;
    for (int i = 0; i < 20; ++i) {
      const std::string name = catalog_names()[i % catalog_names().size()];
      const Problem& problem = catalog(name);
      const UVFrame frame = build_frame(problem);
      Polytope sub = frame.subdiff();
      sub.synthesize_facets();
      const double max_eps = max_feasible_epsilon(sub, frame.V());
      const double cap =
          std::min(std::isfinite(max_eps) ? max_eps : problem.eps_bar(),
                   problem.eps_bar());
      const double eps = rng.uniform(0.3, 0.7) * cap;
      const double radius = 0.8 * track_radius(problem.eps_bar(), eps);
      const int m = frame.u_dim();
      const VectorXd u = rng.in_ball(VectorXd::Zero(m), radius);
      const auto ri = epsilon_relative_interior(sub, frame.V(), eps);
      const auto gbars = sample_hull(ri, 2, rng, 0.1);
      const VectorXd gbar = gbars.back();
      const ULagrangian L(problem, frame, gbar, eps,
                          SolveOptions{ctx.config->grid_n, 1e-13, 1e-6, 1e-4,
                                       1e-3});
      const double refined = L.value(u);
      const auto oracle = dense_grid_min(
          [&](const VectorXd& v) { return L.objective(u, v); }, frame.v_dim(),
          eps, 2001);
      const double gap = std::abs(refined - oracle.value);
      ++instances;
      if (gap > max_gap) {
        max_gap = gap;
        worst = {{"problem", name},   {"eps", eps},
                 {"u", to_std(u)},    {"gbar", to_std(gbar)},
                 {"refined", refined}, {"oracle", oracle.value}};
      }
    }
    r.params = {{"instances", instances}, {"max_gap", max_gap}};
    r.max_violation = max_gap;
    r.pass = max_gap <= 1e-6;
    if (!r.pass) r.witness = worst;
  });
}

// ---------------------------------------------------------------------------
// Per-problem checks
// ---------------------------------------------------------------------------

void check_proxreg(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "proxreg/" + name;
  rec.anchor = "Def 3.7 / Assumption 3.2";
  const Problem& problem = catalog(name);
  const double rho = ctx.config->rho.value_or(problem.rho());
  // the catalog rho is the sharp modulus: below it the certificate must fail
  rec.expected_pass = rho >= problem.rho() - 1e-12;
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const UVFrame frame = build_frame(problem);
    const double eps = default_eps(problem, frame);
    const VectorXd gbar = default_gbar(problem, frame, eps);
    const double eps_bar = ctx.config->eps_bar.value_or(problem.eps_bar());
    const Certificate cert = certify_function_prox_regularity(
        problem, gbar, eps_bar, rho, ctx.config->samples, ctx.config->seed);
    from_certificate(r, cert);
  });
}

void check_uv_geometry(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "uv-geometry/" + name;
  rec.anchor = "Def 4.1, Prop 4.2, Cor 4.3";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const Problem& problem = *env.problem;

    // gtilde-independence of V over 10 choices
    Rng rng(ctx.config->seed + 5);
    const auto gtildes = sample_hull(env.frame.subdiff(), 10, rng, 0.0);
    double max_angle = 0.0;
    const Subspace V0 = env.frame.V();
    for (const auto& gt : gtildes) {
      const UVFrame alt = build_frame(problem, gt);
      max_angle = std::max(max_angle, max_principal_angle(V0, alt.V()));
    }
    // U = U' = normal cone, and the g_u spread
    const Subspace uprime =
        u_prime_crosscheck(problem, env.eps, ctx.config->seed);
    const double uprime_angle = max_principal_angle(env.frame.U(), uprime);
    const double spread = gu_constancy(problem, env.frame);

    r.params = {{"gtilde_choices", 10},
                {"max_V_angle", max_angle},
                {"uprime_angle", uprime_angle},
                {"gu_spread", spread},
                {"dim_U", env.frame.u_dim()},
                {"dim_V", env.frame.v_dim()}};
    r.max_violation = std::max({max_angle, uprime_angle, spread});
    r.pass = max_angle <= 1e-8 && uprime_angle <= 1e-8 && spread <= 1e-10;
    if (!r.pass)
      r.witness = {{"max_V_angle", max_angle},
                   {"uprime_angle", uprime_angle},
                   {"gu_spread", spread}};
  });
}

void check_ulag_core(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "ulag-core/" + name;
  rec.anchor = "Thm 3.6(i)";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const double f0 = env.problem->eval(env.problem->base_point());
    double max_value_gap = 0.0, max_diameter = 0.0, max_vnorm = 0.0;
    double L0 = 0.0;
    int clusters_max = 0;
    for (const auto& g : env.gbar_samples) {
      const ULagEval ev =
          inner_minimize(*env.problem, env.frame, VectorXd::Zero(env.frame.u_dim()),
                         g, env.eps,
                         SolveOptions{ctx.config->grid_n, 1e-13, 1e-6, 1e-4, 1e-3});
      L0 = ev.value;
      max_value_gap = std::max(max_value_gap, std::abs(ev.value - f0));
      max_diameter = std::max(max_diameter, ev.max_cluster_diameter);
      clusters_max = std::max(clusters_max, static_cast<int>(ev.minimizers.size()));
      for (const auto& v : ev.minimizers) max_vnorm = std::max(max_vnorm, v.norm());
    }
    r.params = {{"gbar_samples", static_cast<long>(env.gbar_samples.size())},
                {"eps", env.eps},
                {"L0", L0},
                {"f_at_base", f0},
                {"L0_gap", max_value_gap},
                {"cluster_diameter", max_diameter},
                {"v0_norm", max_vnorm},
                {"clusters", clusters_max}};
    r.max_violation = std::max(max_value_gap, max_diameter);
    r.pass = max_value_gap <= 1e-9 && max_diameter <= 1e-6 &&
             clusters_max == 1 && max_vnorm <= 1e-9;
    if (!r.pass) r.witness = r.params;
  });
}

void check_ulag_grad0(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "ulag-grad0/" + name;
  rec.anchor = "Thm 4.8";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    double max_err = 0.0, max_tol = 0.0;
    for (const auto& g : env.gbar_samples) {
      const VectorXd grad = grad_L_at_zero(*env.problem, env.frame, g, env.eps);
      const VectorXd gu = env.frame.u_coords(g);
      const double err = (grad - gu).norm();
      const double tol = 1e-5 * (1.0 + g.norm());
      max_err = std::max(max_err, err);
      max_tol = std::max(max_tol, err / tol);
    }
    r.params = {{"max_error", max_err}, {"worst_ratio_to_tolerance", max_tol}};
    r.max_violation = max_err;
    r.pass = max_tol <= 1.0;
    if (!r.pass) r.witness = r.params;
  });
}

void check_ulag_qlb(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "ulag-qlb/" + name;
  rec.anchor = "Thm 3.6(iii)";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const Certificate cert = quadratic_lower_bound_check(
        *env.problem, env.frame, env.gbar, env.eps, 1000, ctx.config->seed);
    from_certificate(r, cert);
    const double min_slack = cert.params.at("min_slack").get<double>();
    if (name == "P2" && std::abs(min_slack) > 1e-8) {
      // the nonconvex modulus-1 catalog entry must sit on the equality case
      r.pass = false;
      r.witness = {{"min_slack", min_slack},
                   {"reason", "equality case violated"}};
    }
  });
}

void check_tilt(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "tilt/" + name;
  rec.anchor = "Prop 3.11";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const Polytope ri =
        eps_relative_interior_at_base(*env.problem, env.frame, env.eps);
    Rng rng(ctx.config->seed + 21);
    const auto targets = sample_hull(ri, 20, rng, 0.05);
    double max_diam = 0.0, max_dist0 = 0.0;
    int worst_clusters = 1;
    for (const auto& t : targets) {
      const VectorXd s = env.frame.v_coords(t) - env.frame.v_coords(env.gbar);
      const TiltSample tilt =
          tilt_map(*env.problem, env.frame, env.gbar, env.eps, s);
      max_diam = std::max(max_diam, tilt.cluster_diameter);
      worst_clusters =
          std::max(worst_clusters, static_cast<int>(tilt.cluster.size()));
      for (const auto& v : tilt.cluster)
        max_dist0 = std::max(max_dist0, v.norm());
    }
    r.params = {{"tilts", static_cast<long>(targets.size())},
                {"max_cluster_diameter", max_diam},
                {"max_distance_to_zero", max_dist0},
                {"clusters", worst_clusters}};
    r.max_violation = std::max(max_diam, max_dist0);
    r.pass = max_diam <= 1e-6 && max_dist0 <= 1e-6 && worst_clusters == 1;
    if (!r.pass) r.witness = r.params;
  });
}

void check_monotonicity(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "monotonicity/" + name;
  rec.anchor = "Thm 3.15";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const Certificate wlip = estimate_W_lipschitz(*env.problem, env.frame,
                                                  env.gbar, env.eps, 9);
    const double c = wlip.params.at("c").get<double>();
    const double c_used = 1.1 * c;  // 10% headroom over the grid estimate
    const double rho_hat = env.problem->rho() * (1.0 + c_used * c_used);
    const Certificate cert = certify_localization_monotonicity(
        *env.problem, env.frame, env.gbar, env.eps, rho_hat, 100,
        ctx.config->seed);
    from_certificate(r, cert);
    r.params["c_estimate"] = c;
    r.params["rho_hat"] = rho_hat;
  });
}

void check_w_lipschitz(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "w-lipschitz/" + name;
  rec.anchor = "Assumption 3.14";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const Certificate cert =
        estimate_W_lipschitz(*env.problem, env.frame, env.gbar, env.eps, 9);
    from_certificate(r, cert);
  });
}

void check_marginal_link(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "marginal-link/" + name;
  rec.anchor = "Thm 3.5(iv)";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const int m = env.frame.u_dim();
    std::vector<VectorXd> us{VectorXd::Zero(m)};
    if (m > 0) {
      const double t = (name == "P6") ? 0.1 : (name == "P1" ? 0.3 : 0.2);
      us.push_back((t * VectorXd::Unit(m, 0)).eval());
    }
    double worst = 0.0;
    json witness = json(nullptr);
    bool pass = true;
    for (const auto& u : us) {
      const MarginalLink link = marginal_subgradient_link(
          *env.problem, env.frame, env.gbar, env.eps, u);
      if (link.membership_distance > worst) {
        worst = link.membership_distance;
        witness = {{"u", to_std(u)},
                   {"s", to_std(link.s)},
                   {"membership_distance", link.membership_distance}};
      }
      pass = pass && link.pass;
    }
    r.params = {{"points", static_cast<long>(us.size())},
                {"max_membership_distance", worst}};
    r.max_violation = worst;
    r.pass = pass;
    if (!pass) r.witness = witness;
  });
}

// ---------------------------------------------------------------------------
// Fast-track family (minimizer base points only)
// ---------------------------------------------------------------------------

bool fast_track_eligible(const std::string& name) {
  const auto& v = fast_track_problems();
  return std::find(v.begin(), v.end(), name) != v.end();
}

void check_fasttrack(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "fasttrack/" + name;
  rec.anchor = "Def 5.1, Lemma 5.7";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const auto grid = default_u_grid(env.frame.u_dim());
    const TrajectoryTrace trace = trace_fast_track(*env.problem, env.frame,
                                                   env.eps, grid,
                                                   env.gbar_samples);
    const SmoothSelectionDiagnostics diag =
        check_smooth_selection(*env.problem, env.frame, env.eps);
    const ManifoldModel model = ManifoldModel::from_solver(
        *env.problem, env.frame, env.eps, env.gbar, 0.2, "traced");
    const Subspace tangent = tangent_space(model);
    const double tangent_angle = max_principal_angle(tangent, env.frame.U());

    // closed-form deviation for the curved catalog track
    double track_dev = 0.0;
    if (name == "P6") {
      for (size_t i = 0; i < grid.size(); ++i) {
        const double u = grid[i][0];
        track_dev = std::max(track_dev,
                             std::abs(trace.v_of_u[i][0] - u * u));
      }
    }
    double v0_norm = 0.0;
    for (size_t i = 0; i < grid.size(); ++i)
      if (grid[i].norm() <= 1e-15) v0_norm = trace.v_of_u[i].norm();

    r.params = {{"grid_points", static_cast<long>(grid.size())},
                {"selection_spread", trace.max_selection_spread},
                {"v0_norm", v0_norm},
                {"jacobian_norm", diag.jacobian_norm},
                {"ratio_1e-2", diag.ratio_large},
                {"ratio_1e-3", diag.ratio_small},
                {"tangent_angle", tangent_angle},
                {"track_deviation", track_dev}};
    r.max_violation =
        std::max({trace.max_selection_spread, v0_norm, track_dev,
                  diag.jacobian_norm, tangent_angle});
    r.pass = trace.max_selection_spread <= 1e-6 && v0_norm <= 1e-9 &&
             diag.pass && tangent_angle <= 1e-4 && track_dev <= 1e-6;
    if (!r.pass) r.witness = r.params;
  });
}

void check_c1_fasttrack(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "c1-fasttrack/" + name;
  rec.anchor = "Prop 5.2";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const auto grid = default_u_grid(env.frame.u_dim());
    const TrajectoryTrace trace = trace_fast_track(*env.problem, env.frame,
                                                   env.eps, grid,
                                                   env.gbar_samples);
    const C1BatteryVerdict verdict =
        c1_fast_track_battery(*env.problem, env.frame, env.eps, trace);
    r.params = {{"max_gradient_jump", verdict.max_gradient_jump},
                {"jump_bound", verdict.jump_bound},
                {"max_identity_violation", verdict.max_identity_violation}};
    r.max_violation = verdict.max_identity_violation;
    r.pass = verdict.pass;
    if (!r.pass) r.witness = verdict.witness;
  });
}

void check_partly_smooth(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "partly-smooth/" + name;
  rec.anchor = "Def 5.5, Thm 5.14";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const ManifoldModel model = ManifoldModel::from_solver(
        *env.problem, env.frame, env.eps, env.gbar, 0.2, "traced");
    const PartialSmoothnessVerdict verdict = partial_smoothness_battery(model);
    r.params = {{"fit_residual", verdict.fit_residual},
                {"regularity_violation", verdict.regularity_violation},
                {"normal_angle", verdict.normal_angle},
                {"isc_final", verdict.isc.max_violation},
                {"failing_part", verdict.failing_part()}};
    r.max_violation = std::max({verdict.fit_residual, verdict.normal_angle,
                                verdict.isc.max_violation});
    r.pass = verdict.pass();
    if (!r.pass) r.witness = verdict.witness;
  });
}

void check_partly_smooth_negative(CheckContext& ctx) {
  CheckRecord rec;
  rec.id = "partly-smooth-negative/P6-wrong-manifold";
  rec.anchor = "Def 5.5(iv)";
  rec.expected_pass = false;  // a true negative is part of the suite
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env("P6", *ctx.config);
    const int p = env.frame.v_dim();
    const ManifoldModel model = ManifoldModel::from_selection(
        *env.problem, env.frame, env.eps,
        [p](const VectorXd&) { return VectorXd::Zero(p); }, 0.2, "x1-axis");
    const PartialSmoothnessVerdict verdict = partial_smoothness_battery(model);
    r.params = {{"failing_part", verdict.failing_part()},
                {"fit_residual", verdict.fit_residual},
                {"normal_angle", verdict.normal_angle},
                {"isc_final", verdict.isc.max_violation}};
    r.max_violation = verdict.isc.max_violation;
    r.pass = verdict.pass();
    if (!r.pass) {
      r.witness = verdict.witness;
      r.params["expected_failing_part"] = "iv";
    }
  });
}

void check_inner_semicontinuity(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "inner-semicontinuity/" + name;
  rec.anchor = "Thm 5.10";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const ManifoldModel model = ManifoldModel::from_solver(
        *env.problem, env.frame, env.eps, env.gbar, 0.2, "traced");
    std::vector<VectorXd> targets = env.frame.subdiff().generators();
    targets.push_back(env.gbar);
    const Certificate cert = inner_semicontinuity_check(model, targets);
    from_certificate(r, cert);
  });
}

void check_assumptions5(CheckContext& ctx, const std::string& name) {
  CheckRecord rec;
  rec.id = "assumptions5/" + name;
  rec.anchor = "Assumptions 5.8-5.13";
  ctx.add(std::move(rec), [&](CheckRecord& r) {
    const ProblemEnv env = make_env(name, *ctx.config);
    const ManifoldModel model = ManifoldModel::from_solver(
        *env.problem, env.frame, env.eps, env.gbar, 0.2, "traced");
    const auto certs = check_section5_assumptions(model, env.eps, 0.2);
    bool all_pass = true;
    double max_violation = 0.0;
    for (const auto& c : certs) {
      r.params[to_string(c.kind)] = {{"verdict", c.pass ? "pass" : "fail"},
                                     {"max_violation", c.max_violation}};
      all_pass = all_pass && c.pass;
      max_violation = std::max(max_violation, c.max_violation);
      if (!c.pass && c.witness.has_value()) r.witness = *c.witness;
    }
    r.max_violation = max_violation;
    r.pass = all_pass;
  });
}

}  // namespace

const std::vector<std::string>& known_check_ids() {
  static const std::vector<std::string> ids{
      "ball-inclusion", "proxreg",      "proxreg-sets",
      "product-set",    "perturbation", "uv-geometry",
      "ulag-core",      "ulag-grad0",   "ulag-qlb",
      "ulag-oracle",    "tilt",         "monotonicity",
      "w-lipschitz",    "marginal-link", "fasttrack",
      "c1-fasttrack",   "partly-smooth", "partly-smooth-negative",
      "inner-semicontinuity", "assumptions5"};
  return ids;
}

std::vector<std::string> validate_config(const RunConfig& config) {
  std::vector<std::string> errors;
  for (const auto& p : config.problems)
    if (!is_catalog_name(p)) errors.push_back("unknown problem name: " + p);
  if (!config.all_problems && config.problems.empty())
    errors.push_back("no problems selected (use --problem or --all)");
  if (config.check != "all") {
    const auto& ids = known_check_ids();
    if (std::find(ids.begin(), ids.end(), config.check) == ids.end())
      errors.push_back("unknown check id: " + config.check);
  }
  if (config.eps && config.eps_bar && !(*config.eps < *config.eps_bar))
    errors.push_back("eps must be strictly below eps_bar");
  if (config.eps && *config.eps <= 0.0) errors.push_back("eps must be positive");
  if (config.grid_n < 3) errors.push_back("grid-n must be at least 3");
  if (config.samples < 1) errors.push_back("samples must be positive");
  return errors;
}

Report run(const RunConfig& config) {
  const auto errors = validate_config(config);
  if (!errors.empty()) {
    std::string all;
    for (const auto& e : errors) all += e + "; ";
    throw PreconditionViolation("invalid config: " + all);
  }
  std::vector<std::string> problems =
      config.all_problems ? catalog_names() : config.problems;

  std::vector<CheckRecord> records;
  CheckContext ctx{&config, &records};
  const auto selected = [&](const std::string& id) {
    return config.check == "all" || config.check == id;
  };

  if (selected("ball-inclusion")) check_ball_inclusion(ctx);
  if (selected("proxreg-sets")) check_proxreg_sets(ctx);
  if (selected("product-set")) check_product_set(ctx);
  if (selected("perturbation")) check_perturbation(ctx);
  if (selected("ulag-oracle")) check_ulag_oracle(ctx);

  for (const auto& name : problems) {
    if (selected("proxreg")) check_proxreg(ctx, name);
    if (selected("uv-geometry")) check_uv_geometry(ctx, name);
    if (selected("ulag-core")) check_ulag_core(ctx, name);
    if (selected("ulag-grad0")) check_ulag_grad0(ctx, name);
    if (selected("ulag-qlb")) check_ulag_qlb(ctx, name);
    if (selected("tilt")) check_tilt(ctx, name);
    if (selected("monotonicity")) check_monotonicity(ctx, name);
    if (selected("w-lipschitz")) check_w_lipschitz(ctx, name);
    if (selected("marginal-link")) check_marginal_link(ctx, name);
    if (fast_track_eligible(name)) {
      if (selected("fasttrack")) check_fasttrack(ctx, name);
      if (selected("c1-fasttrack")) check_c1_fasttrack(ctx, name);
      if (selected("partly-smooth")) check_partly_smooth(ctx, name);
      if (selected("inner-semicontinuity")) check_inner_semicontinuity(ctx, name);
      if (selected("assumptions5")) check_assumptions5(ctx, name);
    }
  }
  const bool p6_selected =
      std::find(problems.begin(), problems.end(), "P6") != problems.end();
  if (selected("partly-smooth-negative") && p6_selected)
    check_partly_smooth_negative(ctx);

  std::sort(records.begin(), records.end(),
            [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });

  long n_pass = 0, n_fail = 0, n_expected_fail = 0;
  json recs = json::array();
  for (const auto& r : records) {
    if (r.pass && r.expected_pass)
      ++n_pass;
    else if (!r.pass && !r.expected_pass)
      ++n_expected_fail;
    else
      ++n_fail;
    recs.push_back({{"id", r.id},
                    {"anchor", r.anchor},
                    {"params", r.params},
                    {"verdict", r.pass ? "pass" : "fail"},
                    {"expected", r.expected_pass ? "pass" : "fail"},
                    {"max_violation", r.max_violation},
                    {"witness", r.witness},
                    {"wall_ms", r.wall_ms}});
  }

  json cfg{{"problems", problems},
           {"check", config.check},
           {"grid_n", config.grid_n},
           {"samples", config.samples},
           {"seed", config.seed}};
  cfg["eps"] = config.eps ? json(*config.eps) : json(nullptr);
  cfg["eps_bar"] = config.eps_bar ? json(*config.eps_bar) : json(nullptr);
  cfg["rho"] = config.rho ? json(*config.rho) : json(nullptr);

  Report report;
  report.doc = {{"schema", "uvlag-report/1"},
                {"config", cfg},
                {"records", recs},
                {"summary",
                 {{"pass", n_pass},
                  {"fail", n_fail},
                  {"expected_fail", n_expected_fail}}}};
  report.exit_code = (n_fail == 0) ? 0 : 1;
  return report;
}

bool report_conforms(const json& report, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!report.is_object()) return fail("report is not an object");
  for (const auto& key : {"schema", "config", "records", "summary"})
    if (!report.contains(key)) return fail(std::string("missing field: ") + key);
  if (report["schema"] != "uvlag-report/1") return fail("schema tag mismatch");
  if (!report["records"].is_array()) return fail("records is not an array");
  for (const auto& r : report["records"]) {
    for (const auto& key :
         {"id", "anchor", "params", "verdict", "expected", "max_violation",
          "witness", "wall_ms"})
      if (!r.contains(key)) return fail(std::string("record missing: ") + key);
    if (r["anchor"].get<std::string>().empty()) return fail("empty anchor");
    const auto v = r["verdict"].get<std::string>();
    if (v != "pass" && v != "fail") return fail("bad verdict: " + v);
  }
  const auto& s = report["summary"];
  for (const auto& key : {"pass", "fail", "expected_fail"})
    if (!s.contains(key)) return fail(std::string("summary missing: ") + key);
  const long total = s["pass"].get<long>() + s["fail"].get<long>() +
                     s["expected_fail"].get<long>();
  if (total != static_cast<long>(report["records"].size()))
    return fail("summary counts do not add up to the record count");
  return true;
}

json strip_wall_times(json report) {
  if (report.contains("records"))
    for (auto& r : report["records"]) r["wall_ms"] = 0.0;
  return report;
}

}  // namespace uvlag
