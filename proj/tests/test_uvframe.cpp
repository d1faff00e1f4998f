#include <doctest.h>

#include "uvlag/uvframe.hpp"

using namespace uvlag;

TEST_CASE("frames for the canonical catalog shapes") {
  // P1: U is the x1-axis, V the x2-axis
  const UVFrame f1 = build_frame(catalog("P1"));
  CHECK(f1.u_dim() == 1);
  CHECK(f1.v_dim() == 1);
  CHECK(std::abs(f1.Ubar()(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(f1.Vbar()(1, 0)) == doctest::Approx(1.0));

  // P4: the subdifferential is a singleton, V = {0}
  const UVFrame f4 = build_frame(catalog("P4"));
  CHECK(f4.u_dim() == 2);
  CHECK(f4.v_dim() == 0);

  // P3: the box spans the plane, U = {0}
  const UVFrame f3 = build_frame(catalog("P3"));
  CHECK(f3.u_dim() == 0);
  CHECK(f3.v_dim() == 2);
}

TEST_CASE("frame reconstruction and orthogonality on random points") {
  Rng rng(41);
  for (const auto& name : catalog_names()) {
    const UVFrame f = build_frame(catalog(name));
    CHECK(f.u_dim() + f.v_dim() == 2);
    for (int i = 0; i < 25; ++i) {
      const VectorXd x = rng.gaussian_vector(2);
      const VectorXd r = f.Ubar() * f.u_coords(x) + f.Vbar() * f.v_coords(x);
      CHECK((r - x).norm() <= 1e-12);
    }
  }
}

TEST_CASE("the V subspace does not depend on the choice of gtilde") {
  Rng rng(43);
  for (const auto& name : catalog_names()) {
    const Problem& P = catalog(name);
    const UVFrame base = build_frame(P);
    const auto gtildes = sample_hull(base.subdiff(), 10, rng, 0.0);
    for (const auto& gt : gtildes) {
      const UVFrame alt = build_frame(P, gt);
      CHECK(max_principal_angle(base.V(), alt.V()) <= 1e-8);
      CHECK(alt.v_dim() == base.v_dim());
    }
  }
}

TEST_CASE("U' cross-check agrees with the frame on every catalog problem") {
  for (const auto& name : catalog_names()) {
    const Problem& P = catalog(name);
    const UVFrame f = build_frame(P);
    const Subspace uprime = u_prime_crosscheck(P);
    CHECK(uprime.dim() == f.u_dim());
    CHECK(max_principal_angle(uprime, f.U()) <= 1e-8);
  }
}

TEST_CASE("U-projections of subgradients are constant") {
  for (const auto& name : catalog_names()) {
    const Problem& P = catalog(name);
    const UVFrame f = build_frame(P);
    CHECK(gu_constancy(P, f) <= 1e-10);
  }
}
