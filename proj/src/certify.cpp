#include "uvlag/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uvlag {

namespace {

constexpr double kWindowSlack = 1e-12;  // strict windows, float slack

std::vector<double> to_std(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Structured probe targets: +e1, -e1, +e2, ... with ascending magnitudes
// k/4 * radius. Scanned before low-discrepancy targets so that witnesses at
// boundary extremes are reported deterministically.
std::vector<VectorXd> probe_targets(const VectorXd& center, double radius) {
  std::vector<VectorXd> out;
  const int n = static_cast<int>(center.size());
  for (int d = 0; d < n; ++d) {
    for (double sgn : {1.0, -1.0}) {
      for (int k = 1; k <= 4; ++k) {
        out.push_back(center + sgn * (0.25 * k * radius) * VectorXd::Unit(n, d));
      }
    }
  }
  // reorder: all magnitudes of +e1 first, then -e1, etc. (already the case)
  return out;
}

}  // namespace

Certificate certify_function_prox_regularity(const Problem& problem,
                                             const VectorXd& gbar,
                                             double eps_bar, double rho,
                                             long n_samples,
                                             std::uint64_t seed) {
  const VectorXd& xbar = problem.base_point();
  const double fbar = problem.eval(xbar);
  const int n = problem.dim();

  Certificate cert;
  cert.kind = CertKind::ProxRegFunction;
  cert.params = {{"problem", problem.name()}, {"eps_bar", eps_bar},
                 {"rho", rho},                {"samples", n_samples},
                 {"seed", seed},              {"gbar", to_std(gbar)}};

  // (x, g) pairs: base point with the window center first, then the
  // subdifferential generators, then sampled nearby points with their
  // generators (attentive window applied).
  std::vector<std::pair<VectorXd, VectorXd>> pairs;
  pairs.emplace_back(xbar, gbar);
  const SubdiffResult base_sd = problem.limiting_subdifferential(xbar);
  for (const auto& g : base_sd.polytope.generators()) {
    if ((g - gbar).norm() < eps_bar - kWindowSlack) pairs.emplace_back(xbar, g);
  }
  // generators pulled 1% toward the hull centroid: strictly inside windows
  // whose radius coincides with the generator norm (the window is open, so
  // the extreme subgradients themselves may be excluded above)
  {
    const VectorXd c = base_sd.polytope.centroid();
    for (const auto& g : base_sd.polytope.generators()) {
      const VectorXd inner = c + 0.99 * (g - c);
      if ((inner - c).norm() <= 1e-12) continue;
      if ((inner - gbar).norm() < eps_bar - kWindowSlack)
        pairs.emplace_back(xbar, inner);
    }
  }

  // the violation is affine in g, so checking hull generators inside the
  // window loses nothing over interior subgradients
  {
    HaltonSampler halton(n, seed + 1);
    const long want_pairs = std::max<long>(4, n_samples / 200);
    long attempts = 0;
    while (static_cast<long>(pairs.size()) < want_pairs && attempts < 10 * want_pairs) {
      ++attempts;
      const VectorXd x = halton.next_in_ball(xbar, eps_bar * (1.0 - 1e-9));
      try {
        if (std::abs(problem.eval(x) - fbar) >= eps_bar - kWindowSlack) continue;
        const SubdiffResult sd = problem.limiting_subdifferential(x);
        for (const auto& g : sd.polytope.generators())
          if ((g - gbar).norm() < eps_bar - kWindowSlack) pairs.emplace_back(x, g);
      } catch (const OracleUnavailable&) {
        ++cert.samples_skipped;
      }
    }
  }

  std::vector<VectorXd> targets = probe_targets(xbar, eps_bar);
  // concentric shells around the base point: prox-regularity violations of
  // near-sharp moduli concentrate arbitrarily close to xbar
  for (int j = 1; j <= 5; ++j) {
    HaltonSampler shell(n, seed + 100 + static_cast<std::uint64_t>(j));
    for (int i = 0; i < 32; ++i)
      targets.push_back(shell.next_in_ball(xbar, eps_bar * std::pow(0.5, j)));
  }
  const long n_target_samples = std::max<long>(
      16, n_samples / static_cast<long>(pairs.size()) -
              static_cast<long>(targets.size()));
  {
    HaltonSampler halton(n, seed);
    for (long i = 0; i < n_target_samples; ++i)
      targets.push_back(halton.next_in_ball(xbar, eps_bar));
  }

  double max_violation = -std::numeric_limits<double>::infinity();
  json witness;
  for (const auto& [x, g] : pairs) {
    const double fx = problem.eval(x);
    for (const auto& xp : targets) {
      if ((xp - xbar).norm() > eps_bar + 1e-15) continue;
      const VectorXd d = xp - x;
      const double bound = fx + g.dot(d) - 0.5 * rho * d.squaredNorm();
      const double viol = bound - problem.eval(xp);
      ++cert.samples_used;
      if (viol > max_violation) {
        max_violation = viol;
        witness = {{"x", to_std(x)},   {"g", to_std(g)},
                   {"x_prime", to_std(xp)}, {"violation", viol}};
      }
    }
  }
  cert.max_violation = std::max(0.0, max_violation);
  if (cert.max_violation > 1e-9) cert.witness = witness;
  return finalize_certificate(std::move(cert), 1e-9);
}

namespace {

// Normal directions used by the set certificates: the unit generators plus
// normalized angular mixtures when the cone has two generators (corners).
std::vector<VectorXd> cone_sample_dirs(const SetDescr& set, const VectorXd& x,
                                       std::uint64_t index) {
  auto dirs = set.unit_normals(x);
  if (dirs.size() == 2) {
    for (int k = 1; k <= 3; ++k) {
      const double t =
          halton_radical_inverse(index + static_cast<std::uint64_t>(k), 5);
      VectorXd w = (1.0 - t) * dirs[0] + t * dirs[1];
      const double nrm = w.norm();
      if (nrm > 1e-12) dirs.push_back(w / nrm);
    }
  }
  return dirs;
}

}  // namespace

Certificate certify_set_prox_regularity(const SetDescr& set,
                                        const VectorXd& xbar,
                                        const VectorXd& wbar, double eps,
                                        double rho, long n_samples,
                                        std::uint64_t seed) {
  Certificate cert;
  cert.kind = CertKind::ProxRegSet;
  cert.params = {{"set", set.name()}, {"xbar", to_std(xbar)},
                 {"wbar", to_std(wbar)}, {"eps", eps},
                 {"rho", rho},        {"samples", n_samples},
                 {"seed", seed}};
  if (!set.contains(xbar, 1e-9))
    throw PreconditionViolation("xbar is not in the set");

  // (x, w) pairs inside the window
  std::vector<std::pair<VectorXd, VectorXd>> pairs;
  for (const auto& w : cone_sample_dirs(set, xbar, seed))
    if ((w - wbar).norm() < eps - kWindowSlack) pairs.emplace_back(xbar, w);
  const long n_x = std::max<long>(8, static_cast<long>(std::sqrt(double(n_samples))));
  for (long i = 0; i < 4 * n_x && static_cast<long>(pairs.size()) < n_x; ++i) {
    const std::uint64_t idx = seed * 1000003ull + static_cast<std::uint64_t>(i);
    const VectorXd x = set.sample_point(idx, xbar, eps);
    if ((x - xbar).norm() >= eps - kWindowSlack) continue;
    if (!set.contains(x, 1e-9)) continue;
    for (const auto& w : cone_sample_dirs(set, x, idx))
      if ((w - wbar).norm() < eps - kWindowSlack) pairs.emplace_back(x, w);
  }

  // targets x' in C within the eps-ball around xbar
  std::vector<VectorXd> targets;
  const long n_t = std::max<long>(16, n_samples / std::max<long>(1, (long)pairs.size()));
  for (long i = 0; static_cast<long>(targets.size()) < n_t && i < 20 * n_t; ++i) {
    const std::uint64_t idx = (seed + 7) * 999983ull + static_cast<std::uint64_t>(i);
    const VectorXd xp = set.sample_point(idx, xbar, eps);
    if ((xp - xbar).norm() > eps + 1e-15) continue;
    if (!set.contains(xp, 1e-9)) continue;
    targets.push_back(xp);
  }

  double max_violation = -std::numeric_limits<double>::infinity();
  json witness;
  for (const auto& [x, w] : pairs) {
    for (const auto& xp : targets) {
      const VectorXd d = xp - x;
      const double viol = w.dot(d) - 0.5 * rho * d.squaredNorm();
      ++cert.samples_used;
      if (viol > max_violation) {
        max_violation = viol;
        witness = {{"x", to_std(x)},   {"w", to_std(w)},
                   {"x_prime", to_std(xp)}, {"violation", viol}};
      }
    }
  }
  cert.max_violation = std::max(0.0, max_violation);
  if (cert.max_violation > 1e-9) cert.witness = witness;
  return finalize_certificate(std::move(cert), 1e-9);
}

Certificate certify_product_set(const SetDescr& D, const SetDescr& E,
                                const VectorXd& xbarD, const VectorXd& wbarD,
                                const VectorXd& xbarE, const VectorXd& wbarE,
                                double eps, double rho, long n_samples,
                                std::uint64_t seed) {
  const auto product = make_product(
      std::shared_ptr<const SetDescr>(&D, [](const SetDescr*) {}),
      std::shared_ptr<const SetDescr>(&E, [](const SetDescr*) {}));
  VectorXd xbar(D.dim() + E.dim()), wbar(D.dim() + E.dim());
  xbar.head(D.dim()) = xbarD;
  xbar.tail(E.dim()) = xbarE;
  wbar.head(D.dim()) = wbarD;
  wbar.tail(E.dim()) = wbarE;

  Certificate product_cert = certify_set_prox_regularity(
      *product, xbar, wbar, eps, rho, n_samples / 2, seed);
  Certificate factor_cert = certify_set_prox_regularity(
      D, xbarD, wbarD, eps, rho, n_samples / 2, seed + 1);

  Certificate cert;
  cert.kind = CertKind::ProductSet;
  cert.params = {{"D", D.name()},
                 {"E", E.name()},
                 {"eps", eps},
                 {"rho", rho},
                 {"product_max_violation", product_cert.max_violation},
                 {"factor_max_violation", factor_cert.max_violation},
                 {"seed", seed}};
  cert.samples_used = product_cert.samples_used + factor_cert.samples_used;
  cert.max_violation =
      std::max(product_cert.max_violation, factor_cert.max_violation);
  if (!product_cert.pass)
    cert.witness = product_cert.witness;
  else if (!factor_cert.pass)
    cert.witness = factor_cert.witness;
  return finalize_certificate(std::move(cert), 1e-9);
}

Certificate certify_perturbation(const SetDescr& set, const VectorXd& xbar,
                                 const VectorXd& vbar, double eps_bar,
                                 double rho, double beta, long n_samples,
                                 std::uint64_t seed) {
  if (!(beta > 0.0 && beta < eps_bar))
    throw PreconditionViolation("beta must lie in (0, eps_bar)");
  Certificate cert;
  cert.kind = CertKind::Perturbed;
  cert.params = {{"set", set.name()}, {"eps_bar", eps_bar}, {"rho", rho},
                 {"beta", beta},      {"reduced_radius", eps_bar - beta},
                 {"seed", seed}};

  const Certificate base = certify_set_prox_regularity(set, xbar, vbar, eps_bar,
                                                       rho, n_samples / 4, seed);
  cert.params["base_max_violation"] = base.max_violation;
  if (!base.pass)
    throw PreconditionViolation("base certificate fails; nothing to perturb");

  // perturbed centers: (xbar, vbar) itself, then sampled (x~, v~)
  std::vector<std::pair<VectorXd, VectorXd>> centers{{xbar, vbar}};
  for (long i = 0; static_cast<long>(centers.size()) < 10 && i < 200; ++i) {
    const std::uint64_t idx = (seed + 3) * 1000033ull + static_cast<std::uint64_t>(i);
    const VectorXd xt = set.sample_point(idx, xbar, beta);
    if ((xt - xbar).norm() > beta + 1e-15) continue;
    if (!set.contains(xt, 1e-9)) continue;
    for (const auto& w : set.unit_normals(xt))
      if ((w - vbar).norm() <= beta + 1e-15) centers.emplace_back(xt, w);
  }
  cert.params["centers"] = static_cast<long>(centers.size());

  double max_violation = 0.0;
  json witness;
  long k = 0;
  for (const auto& [xt, vt] : centers) {
    const Certificate sub = certify_set_prox_regularity(
        set, xt, vt, eps_bar - beta, rho,
        std::max<long>(64, n_samples / (4 * static_cast<long>(centers.size()))),
        seed + 10 + static_cast<std::uint64_t>(k++));
    cert.samples_used += sub.samples_used;
    if (sub.max_violation > max_violation) {
      max_violation = sub.max_violation;
      witness = {{"x_tilde", to_std(xt)},
                 {"v_tilde", to_std(vt)},
                 {"violation", sub.max_violation}};
    }
  }
  cert.max_violation = max_violation;
  if (cert.max_violation > 1e-9) cert.witness = witness;
  return finalize_certificate(std::move(cert), 1e-9);
}

Certificate ball_inclusion_check(const VectorXd& ybar, double alpha,
                                 double beta, long n_samples,
                                 std::uint64_t seed) {
  if (!(beta > 0.0 && beta < alpha))
    throw PreconditionViolation("ball inclusion requires 0 < beta < alpha");
  Certificate cert;
  cert.kind = CertKind::BallInclusion;
  cert.params = {{"alpha", alpha}, {"beta", beta}, {"samples", n_samples},
                 {"seed", seed}};
  const int n = static_cast<int>(ybar.size());

  double max_violation = -std::numeric_limits<double>::infinity();
  json witness;
  auto check = [&](const VectorXd& y, const VectorXd& z) {
    const double viol = (z - ybar).norm() - alpha;
    ++cert.samples_used;
    if (viol > max_violation) {
      max_violation = viol;
      witness = {{"y", to_std(y)}, {"z", to_std(z)}, {"violation", viol}};
    }
  };
  // tight colinear probe: equality case
  {
    const VectorXd d = VectorXd::Unit(n, 0);
    const VectorXd y = ybar + beta * d;
    check(y, y + (alpha - beta) * d);
  }
  HaltonSampler hy(n, seed), hz(n, seed + 1);
  for (long i = 1; i < n_samples; ++i) {
    const VectorXd y = hy.next_in_ball(ybar, beta);
    const VectorXd z = hz.next_in_ball(y, alpha - beta);
    check(y, z);
  }
  cert.max_violation = std::max(0.0, max_violation);
  if (cert.max_violation > 1e-12) cert.witness = witness;
  return finalize_certificate(std::move(cert), 1e-12);
}

Certificate certify_localization_monotonicity(const Problem& problem,
                                              const UVFrame& frame,
                                              const VectorXd& gbar, double eps,
                                              double rho_hat, int n_pairs,
                                              std::uint64_t seed) {
  Certificate cert;
  cert.kind = CertKind::Monotonicity;
  cert.params = {{"problem", problem.name()}, {"eps", eps},
                 {"rho_hat", rho_hat},        {"pairs", n_pairs},
                 {"seed", seed}};
  const int m = frame.u_dim();
  const double r = track_radius(problem.eps_bar(), eps);
  const ULagrangian L(problem, frame, gbar, eps);
  const VectorXd gbar_u = frame.u_coords(gbar);
  const double L0 = L.value(VectorXd::Zero(m));

  // points in the attentive window, with their FD subgradients
  std::vector<VectorXd> us;
  std::vector<VectorXd> ss;
  us.push_back(VectorXd::Zero(m));
  ss.push_back(L.gradient(us[0]));
  if (m > 0) {
    HaltonSampler halton(m, seed);
    const int want = std::max(2, static_cast<int>(std::sqrt(2.0 * n_pairs)) + 1);
    for (int i = 0; static_cast<int>(us.size()) < want && i < 20 * want; ++i) {
      const VectorXd u = halton.next_in_ball(VectorXd::Zero(m), r * (1.0 - 1e-9));
      const double Lu = L.value(u);
      if (std::abs(Lu - L0) >= r - kWindowSlack) continue;
      const VectorXd s = L.gradient(u);
      if ((s - gbar_u).norm() >= r - kWindowSlack) continue;
      us.push_back(u);
      ss.push_back(s);
    }
  }

  double max_violation = 0.0;
  json witness;
  for (size_t i = 0; i < us.size(); ++i) {
    for (size_t j = i; j < us.size(); ++j) {
      const VectorXd du = us[j] - us[i];
      const VectorXd ds = ss[j] - ss[i];
      const double lhs = ds.dot(du) + rho_hat * du.squaredNorm();
      const double viol = -lhs;
      ++cert.samples_used;
      if (viol > max_violation) {
        max_violation = viol;
        witness = {{"u0", to_std(us[i])}, {"u1", to_std(us[j])},
                   {"violation", viol}};
      }
    }
  }
  cert.max_violation = max_violation;
  if (cert.max_violation > 1e-8) cert.witness = witness;
  return finalize_certificate(std::move(cert), 1e-8);
}

Certificate estimate_W_lipschitz(const Problem& problem, const UVFrame& frame,
                                 const VectorXd& gbar, double eps, int grid_n,
                                 std::optional<double> radius) {
  Certificate cert;
  cert.kind = CertKind::WLipschitz;
  const int m = frame.u_dim();
  const double r = radius.value_or(track_radius(problem.eps_bar(), eps));
  cert.params = {{"problem", problem.name()}, {"eps", eps}, {"radius", r},
                 {"grid_n", grid_n}};
  const ULagrangian L(problem, frame, gbar, eps);
  const double f0 = problem.eval(problem.base_point());

  std::vector<VectorXd> us;
  std::vector<VectorXd> vs;
  if (m == 0) {
    us.push_back(VectorXd(0));
    vs.push_back(L.evaluate(us[0]).minimizers[0]);
  } else {
    // lattice over the attentive window
    long total = 1;
    for (int d = 0; d < m; ++d) total *= grid_n;
    for (long flat = 0; flat < total; ++flat) {
      long rem = flat;
      VectorXd u(m);
      for (int d = m - 1; d >= 0; --d) {
        const int i = static_cast<int>(rem % grid_n);
        rem /= grid_n;
        u[d] = -r + 2.0 * r * i / static_cast<double>(grid_n - 1);
      }
      if (u.norm() >= r - kWindowSlack) continue;
      const ULagEval ev = L.evaluate(u);
      if (std::abs(ev.value - f0) >= r - kWindowSlack) continue;
      us.push_back(u);
      vs.push_back(ev.minimizers[0]);
    }
  }
  double c = 0.0;
  double grid_diameter = 0.0;
  for (size_t i = 0; i < us.size(); ++i) {
    for (size_t j = i + 1; j < us.size(); ++j) {
      const double du = (us[i] - us[j]).norm();
      grid_diameter = std::max(grid_diameter, du);
      if (du > 1e-12)
        c = std::max(c, (vs[i] - vs[j]).norm() / du);
    }
  }
  cert.params["c"] = c;
  cert.params["grid_diameter"] = grid_diameter;
  cert.params["grid_points_used"] = static_cast<long>(us.size());
  cert.samples_used = static_cast<long>(us.size());
  cert.max_violation = 0.0;
  return finalize_certificate(std::move(cert), 0.0);
}

Certificate certify_regular_equals_limiting(const Problem& problem,
                                            const std::vector<VectorXd>& points,
                                            CertKind kind) {
  Certificate cert;
  cert.kind = kind;
  cert.params = {{"problem", problem.name()},
                 {"points", static_cast<long>(points.size())}};
  double max_violation = 0.0;
  json witness;
  const double t = 1e-6;
  for (const auto& x : points) {
    SubdiffResult sd = problem.limiting_subdifferential(x);
    ++cert.samples_used;
    if (!sd.regular_equals_limiting) {
      max_violation = std::max(max_violation, 1.0);
      witness = {{"x", to_std(x)}, {"reason", "calculus rule not exact"}};
      continue;
    }
    // the hull's support function must match one-sided difference quotients
    const double fx = problem.eval(x);
    for (int d = 0; d < problem.dim(); ++d) {
      for (double sgn : {1.0, -1.0}) {
        const VectorXd dir = sgn * VectorXd::Unit(problem.dim(), d);
        const double quot = (problem.eval(x + t * dir) - fx) / t;
        const double sup = sd.polytope.support(dir);
        const double err = std::abs(quot - sup);
        if (err > 1e-4 && err > max_violation) {
          max_violation = err;
          witness = {{"x", to_std(x)},
                     {"dir", to_std(dir)},
                     {"quotient", quot},
                     {"support", sup}};
        }
      }
    }
  }
  cert.max_violation = max_violation;
  if (cert.max_violation > 1e-4) cert.witness = witness;
  return finalize_certificate(std::move(cert), 1e-4);
}

std::vector<Certificate> check_section5_assumptions(const ManifoldModel& model,
                                                    double eps, double tau,
                                                    int grid_points) {
  const Problem& problem = model.problem();
  const UVFrame& frame = model.frame();
  const int m = frame.u_dim();

  // manifold sample points G(u) on the tau-grid
  std::vector<VectorXd> u_grid;
  if (m == 0) {
    u_grid.push_back(VectorXd(0));
  } else {
    for (int i = 0; i < grid_points; ++i) {
      const double t = -tau + 2.0 * tau * i / static_cast<double>(grid_points - 1);
      for (int d = 0; d < m; ++d)
        u_grid.push_back(t * VectorXd::Unit(m, d));
    }
  }
  std::vector<VectorXd> pts;
  for (const auto& u : u_grid) pts.push_back(model.G(u));

  std::vector<Certificate> out;

  // A4: regular = limiting near xbar on M
  {
    Certificate a4 =
        certify_regular_equals_limiting(problem, pts, CertKind::AssumptionA4);
    a4.params["tau"] = tau;
    out.push_back(std::move(a4));
  }

  // A5: the selection stays strictly inside the eps-ball
  {
    Certificate a5;
    a5.kind = CertKind::AssumptionA5;
    a5.params = {{"problem", problem.name()}, {"eps", eps}, {"tau", tau}};
    double max_violation = 0.0;
    json witness;
    for (const auto& u : u_grid) {
      const VectorXd v = model.selection(u);
      const double margin = (frame.Vbar() * v).norm() - (eps - 1e-9);
      ++a5.samples_used;
      if (margin > max_violation) {
        max_violation = margin;
        witness = {{"u", to_std(u)}, {"norm_Vv", (frame.Vbar() * v).norm()}};
      }
    }
    a5.max_violation = std::max(0.0, max_violation);
    if (a5.max_violation > 1e-12) a5.witness = witness;
    out.push_back(finalize_certificate(std::move(a5), 1e-12));
  }

  // A6: V-projections of boundary subgradients are attained along M
  {
    Certificate a6;
    a6.kind = CertKind::AssumptionA6;
    a6.params = {{"problem", problem.name()}, {"eps", eps}};
    const int K = 12;
    const VectorXd u0 =
        (m > 0) ? (0.2 * VectorXd::Unit(m, 0)).eval() : VectorXd(0);
    double max_final = 0.0;
    bool monotone = true;
    json witness;
    for (const auto& target : frame.subdiff().generators()) {
      const VectorXd tv = frame.v_coords(target);
      double prev = std::numeric_limits<double>::infinity();
      double final_d = 0.0;
      for (int k = 1; k <= K; ++k) {
        const VectorXd u = std::pow(0.5, k) * u0;
        const SubdiffResult sd = problem.limiting_subdifferential(model.G(u));
        std::vector<VectorXd> proj;
        for (const auto& g : sd.polytope.generators())
          proj.push_back(frame.v_coords(g));
        const double d = (frame.v_dim() == 0)
                             ? 0.0
                             : Polytope(std::move(proj)).distance(tv);
        ++a6.samples_used;
        if (k > 3 && d > prev + 1e-12) monotone = false;
        prev = d;
        final_d = d;
      }
      if (final_d > max_final) {
        max_final = final_d;
        witness = {{"target", to_std(target)}, {"final_distance", final_d}};
      }
    }
    a6.max_violation = monotone ? max_final : std::max(max_final, 1.0);
    if (a6.max_violation > 1e-8) a6.witness = witness;
    out.push_back(finalize_certificate(std::move(a6), 1e-8));
  }

  // A7: regularity and a nonempty subdifferential at every sampled point
  {
    Certificate a7 =
        certify_regular_equals_limiting(problem, pts, CertKind::AssumptionA7);
    a7.params["tau"] = tau;
    out.push_back(std::move(a7));
  }
  return out;
}

}  // namespace uvlag
