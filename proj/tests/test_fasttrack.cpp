#include <doctest.h>

#include "uvlag/fasttrack.hpp"

using namespace uvlag;

namespace {

struct Env {
  const Problem* problem;
  UVFrame frame;
  double eps;
  VectorXd gbar;
  std::vector<VectorXd> gbars;
};

Env env_for(const std::string& name) {
  const Problem& P = catalog(name);
  UVFrame frame = build_frame(P);
  const double eps = default_eps(P, frame);
  VectorXd gbar = default_gbar(P, frame, eps);
  auto gbars = sample_eps_ri(P, frame, eps, 3, 0);
  return Env{&P, std::move(frame), eps, std::move(gbar), std::move(gbars)};
}

}  // namespace

TEST_CASE("traced selections: the parabola and the flat tracks") {
  const Env e6 = env_for("P6");
  const auto grid6 = default_u_grid(1);
  const TrajectoryTrace t6 = trace_fast_track(*e6.problem, e6.frame, e6.eps,
                                              grid6, e6.gbars);
  for (size_t i = 0; i < grid6.size(); ++i) {
    const double u = grid6[i][0];
    CHECK(std::abs(t6.v_of_u[i][0] - u * u) <= 1e-6);
  }
  CHECK(t6.max_selection_spread <= 1e-6);

  const Env e1 = env_for("P1");
  const TrajectoryTrace t1 = trace_fast_track(*e1.problem, e1.frame, e1.eps,
                                              default_u_grid(1), e1.gbars);
  for (const auto& v : t1.v_of_u) CHECK(v.norm() <= 1e-9);

  // u = 0 always selects v = 0
  for (const std::string name : fast_track_problems()) {
    const Env e = env_for(name);
    const TrajectoryTrace t =
        trace_fast_track(*e.problem, e.frame, e.eps,
                         {VectorXd::Zero(e.frame.u_dim())}, e.gbars);
    CHECK(t.v_of_u[0].norm() <= 1e-9);
  }
}

TEST_CASE("multi-cluster minimizer sets abort the trace") {
  // max(|x2|, 0.5) has a flat valley: every v in [-0.5, 0.5] minimizes
  SmoothPiece up{"x2", [](const VectorXd& x) { return x[1]; },
                 [](const VectorXd&) { return make_vector({0.0, 1.0}); },
                 [](const VectorXd&) { return MatrixXd::Zero(2, 2); }};
  SmoothPiece down{"-x2", [](const VectorXd& x) { return -x[1]; },
                   [](const VectorXd&) { return make_vector({0.0, -1.0}); },
                   [](const VectorXd&) { return MatrixXd::Zero(2, 2); }};
  SmoothPiece plateau{"0.5", [](const VectorXd&) { return 0.5; },
                      [](const VectorXd&) { return make_vector({0.0, 0.0}); },
                      [](const VectorXd&) { return MatrixXd::Zero(2, 2); }};
  const Problem flat("flat", 2, FiniteMax{{up, down, plateau}},
                     make_vector({0.0, 1.0}), 3.0, 0.0);
  // subdifferential at (0,1) is the singleton {(0,1)}, so V = {0} from the
  // base point; build a frame by hand with V = x2-axis to expose the plateau
  MatrixXd Ubar(2, 1), Vbar(2, 1);
  Ubar << 1.0, 0.0;
  Vbar << 0.0, 1.0;
  const UVFrame frame(Ubar, Vbar, make_vector({0.0, 0.0}),
                      Polytope({make_vector({0.0, 1.0})}), make_vector({0.0, 1.0}));
  CHECK_THROWS_AS(trace_fast_track(flat, frame, 0.4,
                                   {make_vector({0.0})},
                                   {make_vector({0.0, 0.0})}),
                  MultiClusterMinimizer);
}

TEST_CASE("smooth selection diagnostics") {
  const Env e6 = env_for("P6");
  const SmoothSelectionDiagnostics d6 =
      check_smooth_selection(*e6.problem, e6.frame, e6.eps);
  CHECK(d6.jacobian_norm <= 1e-4);
  CHECK(d6.ratio_small <= 1e-2);
  CHECK(d6.ratio_small <= d6.ratio_large + 1e-12);
  CHECK(d6.ratio_large == doctest::Approx(1e-2).epsilon(1e-3));
  CHECK(d6.pass);

  const Env e1 = env_for("P1");
  const SmoothSelectionDiagnostics d1 =
      check_smooth_selection(*e1.problem, e1.frame, e1.eps);
  CHECK(d1.jacobian_norm <= 1e-12);
  CHECK(d1.ratio_large <= 1e-9);
  CHECK(d1.pass);
}

TEST_CASE("tangent spaces of the traced manifolds") {
  const Env e6 = env_for("P6");
  const ManifoldModel m6 = ManifoldModel::from_solver(
      *e6.problem, e6.frame, e6.eps, e6.gbar, 0.2, "parabola");
  const Subspace t6 = tangent_space(m6);
  CHECK(t6.dim() == 1);
  CHECK(max_principal_angle(t6, e6.frame.U()) <= 1e-4);
  CHECK(max_principal_angle(m6.normal_at_zero(), e6.frame.V()) <= 1e-4);

  // P4: the chart is the whole plane
  const Env e4 = env_for("P4");
  const ManifoldModel m4 = ManifoldModel::from_solver(
      *e4.problem, e4.frame, e4.eps, e4.gbar, 0.2, "plane");
  CHECK(tangent_space(m4).dim() == 2);
}

TEST_CASE("partial smoothness battery: two positives and a true negative") {
  const Env e1 = env_for("P1");
  const ManifoldModel m1 = ManifoldModel::from_solver(
      *e1.problem, e1.frame, e1.eps, e1.gbar, 0.2, "x1-axis");
  const PartialSmoothnessVerdict v1 = partial_smoothness_battery(m1);
  CHECK(v1.pass());

  const Env e6 = env_for("P6");
  const ManifoldModel m6 = ManifoldModel::from_solver(
      *e6.problem, e6.frame, e6.eps, e6.gbar, 0.2, "parabola");
  const PartialSmoothnessVerdict v6 = partial_smoothness_battery(m6);
  CHECK(v6.pass());

  // the x1-axis is the wrong manifold for P6: only part (iv) fails
  const ManifoldModel wrong = ManifoldModel::from_selection(
      *e6.problem, e6.frame, e6.eps,
      [](const VectorXd&) { return make_vector({0.0}); }, 0.2, "x1-axis");
  const PartialSmoothnessVerdict vw = partial_smoothness_battery(wrong);
  CHECK_FALSE(vw.pass());
  CHECK(vw.failing_part() == "iv");
  CHECK(vw.smooth_agreement);
  CHECK(vw.regularity);
  CHECK(vw.normal_matches_V);
  // the attained limit is the lower branch gradient (0, -1)
  REQUIRE(vw.witness.contains("attained_limit"));
  const auto lim = vw.witness["attained_limit"].get<std::vector<double>>();
  CHECK(std::abs(lim[0]) <= 1e-3);
  CHECK(lim[1] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("inner semicontinuity distances decrease along the parabola") {
  const Env e6 = env_for("P6");
  const ManifoldModel m6 = ManifoldModel::from_solver(
      *e6.problem, e6.frame, e6.eps, e6.gbar, 0.2, "parabola");
  std::vector<VectorXd> targets{make_vector({0.0, 0.5}),
                                make_vector({0.0, 1.0}),
                                make_vector({0.0, -1.0})};
  const Certificate cert = inner_semicontinuity_check(m6, targets);
  CHECK(cert.pass);
  CHECK(cert.max_violation <= 1e-4);
  // sequences recorded per target, nonincreasing after k = 3
  const auto seqs = cert.params.at("sequences");
  REQUIRE(seqs.size() == 3);
  for (const auto& entry : seqs) {
    const auto d = entry.at("distances").get<std::vector<double>>();
    for (size_t k = 3; k + 1 < d.size(); ++k) CHECK(d[k + 1] <= d[k] + 1e-12);
  }

  // the smooth problem: singleton subdifferential, distances shrink linearly
  const Env e4 = env_for("P4");
  const ManifoldModel m4 = ManifoldModel::from_solver(
      *e4.problem, e4.frame, e4.eps, e4.gbar, 0.2, "plane");
  const Certificate c4 =
      inner_semicontinuity_check(m4, {make_vector({2.0, 0.0})});
  CHECK(c4.pass);
}

TEST_CASE("C1 battery: gradient jumps and the affine tilt identity") {
  for (const std::string name : fast_track_problems()) {
    const Env e = env_for(name);
    const auto grid = default_u_grid(e.frame.u_dim());
    const TrajectoryTrace trace =
        trace_fast_track(*e.problem, e.frame, e.eps, grid, e.gbars);
    const C1BatteryVerdict verdict =
        c1_fast_track_battery(*e.problem, e.frame, e.eps, trace);
    CHECK(verdict.pass);
    CHECK(verdict.max_identity_violation <= 1e-8);
  }
}
