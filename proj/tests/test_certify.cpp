#include <doctest.h>

#include "uvlag/certify.hpp"

using namespace uvlag;

TEST_CASE("function prox-regularity: the P2 bracket") {
  const Problem& p2 = catalog("P2");
  const UVFrame frame = build_frame(p2);
  const double eps = default_eps(p2, frame);
  const VectorXd gbar = default_gbar(p2, frame, eps);

  const Certificate pass1 = certify_function_prox_regularity(
      p2, gbar, 1.0, 1.0, 10000, 0);
  CHECK(pass1.pass);
  CHECK(pass1.max_violation <= 1e-9);

  const Certificate fail05 = certify_function_prox_regularity(
      p2, gbar, p2.eps_bar(), 0.5, 10000, 0);
  CHECK_FALSE(fail05.pass);
  REQUIRE(fail05.witness.has_value());
  const auto wx = fail05.witness->at("x").get<std::vector<double>>();
  const auto wg = fail05.witness->at("g").get<std::vector<double>>();
  const auto wxp = fail05.witness->at("x_prime").get<std::vector<double>>();
  CHECK(wx[0] == 0.0);
  CHECK(wx[1] == 0.0);
  CHECK(wg[0] == 0.0);
  CHECK(wg[1] == 0.0);
  CHECK(wxp[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wxp[1] == doctest::Approx(0.0).epsilon(1e-12));

  // convexity: rho = 0 passes on P1
  const Problem& p1 = catalog("P1");
  const UVFrame f1 = build_frame(p1);
  const Certificate conv = certify_function_prox_regularity(
      p1, default_gbar(p1, f1, 0.5), 1.0, 0.0, 5000, 0);
  CHECK(conv.pass);
}

TEST_CASE("function prox-regularity: the curved P6 bracket") {
  const Problem& p6 = catalog("P6");
  const UVFrame frame = build_frame(p6);
  const VectorXd gbar = default_gbar(p6, frame, 0.5);
  // the sharp modulus 2 certifies; clearly sub-sharp moduli are caught by
  // near-boundary subgradient pairs against near-base targets
  for (const std::uint64_t seed : {0, 3, 9}) {
    const Certificate at2 = certify_function_prox_regularity(
        p6, gbar, p6.eps_bar(), 2.0, 10000, seed);
    CHECK(at2.pass);
    const Certificate at19 = certify_function_prox_regularity(
        p6, gbar, p6.eps_bar(), 1.9, 10000, seed);
    CHECK_FALSE(at19.pass);
    CHECK(at19.max_violation > 1e-6);
    const Certificate at15 = certify_function_prox_regularity(
        p6, gbar, p6.eps_bar(), 1.5, 10000, seed);
    CHECK_FALSE(at15.pass);
  }
}

TEST_CASE("certificates are monotone in rho and reproducible in the seed") {
  const Problem& p2 = catalog("P2");
  const UVFrame frame = build_frame(p2);
  const VectorXd gbar = default_gbar(p2, frame, 0.25);
  const Certificate a = certify_function_prox_regularity(p2, gbar, 0.5, 1.0,
                                                         4000, 7);
  const Certificate b = certify_function_prox_regularity(p2, gbar, 0.5, 1.5,
                                                         4000, 7);
  CHECK(a.pass);
  CHECK(b.pass);  // larger modulus only loosens the bound
  const Certificate c = certify_function_prox_regularity(p2, gbar, 0.5, 0.5,
                                                         4000, 7);
  const Certificate d = certify_function_prox_regularity(p2, gbar, 0.5, 0.5,
                                                         4000, 7);
  CHECK(c.max_violation == d.max_violation);
  REQUIRE(c.witness.has_value());
  REQUIRE(d.witness.has_value());
  CHECK(*c.witness == *d.witness);
}

TEST_CASE("set prox-regularity on the catalog sets") {
  // half-space: convex, any rho
  const Certificate half = certify_set_prox_regularity(
      *make_halfspace(), make_vector({0.0, 0.0}), make_vector({0.0, 1.0}), 0.5,
      0.0, 4000, 0);
  CHECK(half.pass);

  // complement of the open unit disk: curvature modulus 1
  const Certificate disk = certify_set_prox_regularity(
      *make_disk_complement(), make_vector({1.0, 0.0}),
      make_vector({-1.0, 0.0}), 0.5, 1.0, 4000, 0);
  CHECK(disk.pass);

  // and it is genuinely nonconvex: rho = 0 must fail
  const Certificate disk0 = certify_set_prox_regularity(
      *make_disk_complement(), make_vector({1.0, 0.0}),
      make_vector({-1.0, 0.0}), 0.5, 0.0, 4000, 0);
  CHECK_FALSE(disk0.pass);
  CHECK(disk0.witness.has_value());

  // box corner: convex
  const Certificate box = certify_set_prox_regularity(
      *make_box01(), make_vector({0.0, 0.0}),
      make_vector({-M_SQRT1_2, -M_SQRT1_2}), 0.5, 0.0, 4000, 0);
  CHECK(box.pass);

  // parabola epigraph: convex
  const Certificate epi = certify_set_prox_regularity(
      *make_parabola_epigraph(), make_vector({0.0, 0.0}),
      make_vector({0.0, -1.0}), 0.5, 0.0, 4000, 0);
  CHECK(epi.pass);
}

TEST_CASE("product sets inherit the factor certificate") {
  const Certificate c1 = certify_product_set(
      *make_disk_complement(), *make_interval01(), make_vector({1.0, 0.0}),
      make_vector({-1.0, 0.0}), make_vector({0.5}), make_vector({0.0}), 0.5,
      1.0, 4000, 0);
  CHECK(c1.pass);

  const Certificate c2 = certify_product_set(
      *make_halfspace(), *make_interval01(), make_vector({0.0, 0.0}),
      make_vector({0.0, 1.0}), make_vector({0.5}), make_vector({0.0}), 0.5, 0.0,
      4000, 0);
  CHECK(c2.pass);

  // degenerate second factor {0}
  const Certificate c3 = certify_product_set(
      *make_disk_complement(), *make_point_set(), make_vector({1.0, 0.0}),
      make_vector({-1.0, 0.0}), make_vector({0.0}), make_vector({0.0}), 0.5,
      1.0, 4000, 0);
  CHECK(c3.pass);
}

TEST_CASE("perturbed prox-regularity keeps the modulus at a reduced radius") {
  const auto disk = make_disk_complement();
  const Certificate a = certify_perturbation(*disk, make_vector({1.0, 0.0}),
                                             make_vector({-1.0, 0.0}), 0.5, 1.0,
                                             0.1, 4000, 0);
  CHECK(a.pass);
  CHECK(a.params.at("reduced_radius").get<double>() ==
        doctest::Approx(0.4).epsilon(1e-12));

  const Certificate b = certify_perturbation(*disk, make_vector({1.0, 0.0}),
                                             make_vector({-1.0, 0.0}), 0.5, 1.0,
                                             0.49, 2000, 0);
  CHECK(b.pass);

  CHECK_THROWS_AS(certify_perturbation(*disk, make_vector({1.0, 0.0}),
                                       make_vector({-1.0, 0.0}), 0.5, 1.0, 0.6,
                                       100, 0),
                  PreconditionViolation);
}

TEST_CASE("ball inclusion") {
  const Certificate c =
      ball_inclusion_check(VectorXd::Zero(2), 1.0, 0.3, 10000, 0);
  CHECK(c.pass);
  CHECK(c.max_violation <= 1e-12);
  CHECK_THROWS_AS(ball_inclusion_check(VectorXd::Zero(2), 1.0, 0.0, 10, 0),
                  PreconditionViolation);
  CHECK_THROWS_AS(ball_inclusion_check(VectorXd::Zero(2), 1.0, 1.0, 10, 0),
                  PreconditionViolation);
}

TEST_CASE("localization monotonicity") {
  // P1: convex, rho_hat = 0
  const Problem& p1 = catalog("P1");
  const UVFrame f1 = build_frame(p1);
  const Certificate c1 = certify_localization_monotonicity(
      p1, f1, default_gbar(p1, f1, 0.5), 0.5, 0.0, 60, 0);
  CHECK(c1.pass);

  // P2: modulus 1, empirically constant minimizer, rho_hat = 1
  const Problem& p2 = catalog("P2");
  const UVFrame f2 = build_frame(p2);
  const Certificate c2 = certify_localization_monotonicity(
      p2, f2, default_gbar(p2, f2, 0.25), 0.25, 1.0, 60, 0);
  CHECK(c2.pass);

  // sanity: P2 with rho_hat = 0 must fail (the marginal map is concave)
  const Certificate c0 = certify_localization_monotonicity(
      p2, f2, default_gbar(p2, f2, 0.25), 0.25, 0.0, 60, 0);
  CHECK_FALSE(c0.pass);
}

TEST_CASE("empirical Lipschitz constant of the minimizer selection") {
  const Problem& p1 = catalog("P1");
  const UVFrame f1 = build_frame(p1);
  const Certificate c1 =
      estimate_W_lipschitz(p1, f1, default_gbar(p1, f1, 0.5), 0.5, 9);
  CHECK(c1.params.at("c").get<double>() <= 1e-9);

  const Problem& p6 = catalog("P6");
  const UVFrame f6 = build_frame(p6);
  const Certificate c6 = estimate_W_lipschitz(
      p6, f6, default_gbar(p6, f6, 0.5), 0.5, 9, 0.2);
  CHECK(c6.params.at("c").get<double>() <= 0.41);

  // a single-point grid has c = 0 by convention
  const Problem& p3 = catalog("P3");
  const UVFrame f3 = build_frame(p3);
  const Certificate c3 =
      estimate_W_lipschitz(p3, f3, default_gbar(p3, f3, 0.5), 0.5, 9);
  CHECK(c3.params.at("c").get<double>() == 0.0);
}

TEST_CASE("section-5 assumptions hold on the traced catalog manifolds") {
  for (const std::string name : {"P1", "P6"}) {
    const Problem& P = catalog(name);
    const UVFrame frame = build_frame(P);
    const double eps = default_eps(P, frame);
    const ManifoldModel model = ManifoldModel::from_solver(
        P, frame, eps, default_gbar(P, frame, eps), 0.2, "traced");
    const auto certs = check_section5_assumptions(model, eps, 0.2);
    REQUIRE(certs.size() == 4);
    for (const auto& c : certs) CHECK(c.pass);
  }
}

TEST_CASE("regular-equals-limiting detects a genuinely irregular point") {
  // A declared-smooth piece that is actually -|x1|: the oracle applies the
  // max rule formally, but the concave kink at 0 is not regular, and the
  // difference-quotient cross-check must catch the wrong hull.
  SmoothPiece neg_abs{"-|x1|",
                      [](const VectorXd& x) { return -std::abs(x[0]); },
                      [](const VectorXd& x) {
                        return make_vector({x[0] >= 0.0 ? -1.0 : 1.0, 0.0});
                      },
                      [](const VectorXd&) { return MatrixXd::Zero(2, 2); }};
  SmoothPiece floor_piece{"-0.5",
                          [](const VectorXd&) { return -0.5; },
                          [](const VectorXd&) {
                            return make_vector({0.0, 0.0});
                          },
                          [](const VectorXd&) { return MatrixXd::Zero(2, 2); }};
  const Problem bad("bad", 2, FiniteMax{{neg_abs, floor_piece}},
                    make_vector({0.1, 0.0}), 0.25, 0.0);
  const Certificate cert = certify_regular_equals_limiting(
      bad, {make_vector({0.0, 0.0})}, CertKind::AssumptionA4);
  CHECK_FALSE(cert.pass);
}
