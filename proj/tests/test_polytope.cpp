#include <doctest.h>

#include "uvlag/funcmodel.hpp"
#include "uvlag/polytope.hpp"

using namespace uvlag;

namespace {

Polytope segment(double lo, double hi) {
  return Polytope({make_vector({0.0, lo}), make_vector({0.0, hi})});
}

// brute-force hull distance oracle: dense mixture scan over the generators
double hull_distance_oracle(const Polytope& P, const VectorXd& x) {
  const auto& g = P.generators();
  double best = 1e300;
  if (g.size() == 1) return (x - g[0]).norm();
  if (g.size() == 2) {
    for (int i = 0; i <= 2000; ++i) {
      const double t = i / 2000.0;
      best = std::min(best, (x - (t * g[0] + (1 - t) * g[1])).norm());
    }
    return best;
  }
  for (int i = 0; i <= 60; ++i)
    for (int j = 0; i + j <= 60; ++j)
      for (size_t a = 0; a < g.size(); ++a)
        for (size_t b = 0; b < g.size(); ++b)
          for (size_t c = 0; c < g.size(); ++c) {
            const double la = i / 60.0, lb = j / 60.0;
            const double lc = 1.0 - la - lb;
            best = std::min(
                best, (x - (la * g[a] + lb * g[b] + lc * g[c])).norm());
          }
  return best;
}

}  // namespace

TEST_CASE("span of differences: segment, singleton, box") {
  // P1's subdifferential at the base point is the segment {0} x [-1,1]
  const Polytope seg = segment(-1.0, 1.0);
  const Subspace V = span_of_differences(seg, make_vector({0.0, 1.0}));
  CHECK(V.dim() == 1);
  CHECK(std::abs(std::abs(V.basis()(1, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(V.basis()(0, 0)) < 1e-12);

  const Polytope single({make_vector({2.0, 0.0})});
  CHECK(span_of_differences(single, make_vector({2.0, 0.0})).dim() == 0);

  // P3's subdifferential is the box [-1,1]^2
  const Polytope box({make_vector({-1.0, -1.0}), make_vector({1.0, -1.0}),
                      make_vector({-1.0, 1.0}), make_vector({1.0, 1.0})});
  CHECK(span_of_differences(box, make_vector({1.0, 1.0})).dim() == 2);

  CHECK_THROWS_AS(span_of_differences(seg, make_vector({0.5, 0.0})),
                  PreconditionViolation);
}

TEST_CASE("projection onto subspaces") {
  const Subspace axis2 = Subspace::from_span(make_vector({0.0, 1.0}));
  const VectorXd p = axis2.project(make_vector({3.0, 4.0}));
  CHECK(p[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(4.0).epsilon(1e-14));

  const Subspace zero = Subspace::zero(2);
  CHECK(zero.project(make_vector({1.0, -2.0})).norm() == 0.0);

  MatrixXd diag(2, 1);
  diag << M_SQRT1_2, M_SQRT1_2;
  const Subspace d = Subspace::from_orthonormal(diag);
  const VectorXd q = d.project(make_vector({1.0, 0.0}));
  CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(q[1] == doctest::Approx(0.5).epsilon(1e-13));

  // idempotence on random inputs
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const VectorXd x = rng.gaussian_vector(2);
    CHECK((d.project(d.project(x)) - d.project(x)).norm() <= 1e-12);
  }
}

TEST_CASE("epsilon relative interior: segments and the degenerate V") {
  // P1: shrink {0} x [-1,1] by 0.5
  Polytope seg = segment(-1.0, 1.0);
  seg.synthesize_facets();
  const Subspace V = span_of_differences(seg, seg.generators()[0]);
  const Polytope ri = epsilon_relative_interior(seg, V, 0.5);
  REQUIRE(ri.generators().size() == 2);
  double lo = 1e300, hi = -1e300;
  for (const auto& g : ri.generators()) {
    CHECK(std::abs(g[0]) < 1e-12);
    lo = std::min(lo, g[1]);
    hi = std::max(hi, g[1]);
  }
  CHECK(lo == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(hi == doctest::Approx(0.5).epsilon(1e-12));

  // P5: {0} x [-1,2] shrinks to {0} x [-0.5, 1.5]
  Polytope seg5 = segment(-1.0, 2.0);
  seg5.synthesize_facets();
  const Polytope ri5 = epsilon_relative_interior(
      seg5, span_of_differences(seg5, seg5.generators()[0]), 0.5);
  lo = 1e300;
  hi = -1e300;
  for (const auto& g : ri5.generators()) {
    lo = std::min(lo, g[1]);
    hi = std::max(hi, g[1]);
  }
  CHECK(lo == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(hi == doctest::Approx(1.5).epsilon(1e-12));

  // V = {0}: the condition is vacuous and the set is returned unchanged
  Polytope single({make_vector({2.0, 0.0})});
  const Polytope same =
      epsilon_relative_interior(single, Subspace::zero(2), 123.0);
  CHECK(same.generators().size() == 1);
  CHECK((same.generators()[0] - make_vector({2.0, 0.0})).norm() == 0.0);
}

TEST_CASE("epsilon relative interior: emptiness carries the max feasible eps") {
  Polytope seg = segment(-1.0, 1.0);
  seg.synthesize_facets();
  const Subspace V = span_of_differences(seg, seg.generators()[0]);
  CHECK(max_feasible_epsilon(seg, V) == doctest::Approx(1.0).epsilon(1e-9));
  try {
    epsilon_relative_interior(seg, V, 1.5);
    FAIL("expected EpsilonTooLarge");
  } catch (const EpsilonTooLarge& e) {
    CHECK(e.max_feasible_eps == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("epsilon relative interior: monotone in eps") {
  Polytope box({make_vector({-1.0, -1.0}), make_vector({1.0, -1.0}),
                make_vector({-1.0, 1.0}), make_vector({1.0, 1.0})});
  box.synthesize_facets();
  const Subspace V = span_of_differences(box, box.generators()[0]);
  const Polytope big = epsilon_relative_interior(box, V, 0.3);
  const Polytope small = epsilon_relative_interior(box, V, 0.6);
  Rng rng(7);
  const auto samples = sample_hull(small, 100, rng, 0.0);
  for (const auto& s : samples) CHECK(big.contains(s, 1e-9));
}

TEST_CASE("relative-interior inclusion property") {
  // every g in the eps-shrink plus any V-direction shorter than eps stays
  // inside the original facets
  Polytope seg = segment(-1.0, 2.0);
  seg.synthesize_facets();
  const Subspace V = span_of_differences(seg, seg.generators()[0]);
  const double eps = 0.4;
  const Polytope ri = epsilon_relative_interior(seg, V, eps);
  Rng rng(11);
  const auto points = sample_hull(ri, 20, rng, 0.0);
  for (const auto& g : points) {
    for (int i = 0; i < 50; ++i) {
      const VectorXd d = V.embed(rng.on_sphere(V.dim())) *
                         (eps * (1.0 - 1e-9) * rng.uniform01());
      for (const auto& f : seg.facets())
        CHECK(f.normal.dot(g + d) <= f.offset + 1e-12);
    }
  }
}

TEST_CASE("box shrink degenerates to its center and then empties") {
  Polytope box({make_vector({-1.0, -1.0}), make_vector({1.0, -1.0}),
                make_vector({-1.0, 1.0}), make_vector({1.0, 1.0})});
  box.synthesize_facets();
  const Subspace V = span_of_differences(box, box.generators()[0]);
  CHECK(max_feasible_epsilon(box, V) == doctest::Approx(1.0).epsilon(1e-9));
  const Polytope almost = epsilon_relative_interior(box, V, 0.999);
  for (const auto& g : almost.generators()) CHECK(g.norm() <= 2e-3);
  try {
    epsilon_relative_interior(box, V, 1.2);
    FAIL("expected EpsilonTooLarge");
  } catch (const EpsilonTooLarge& e) {
    CHECK(e.max_feasible_eps == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("normal cones") {
  // segment interior point: the cone is the orthogonal line
  const Polytope seg = segment(-1.0, 1.0);
  const NormalCone c1 = normal_cone(seg, make_vector({0.0, 0.0}));
  CHECK(c1.is_subspace());
  CHECK(c1.lineality.dim() == 1);
  CHECK(std::abs(c1.lineality.basis()(0, 0)) == doctest::Approx(1.0));

  // box interior: zero subspace
  const Polytope box({make_vector({-1.0, -1.0}), make_vector({1.0, -1.0}),
                      make_vector({-1.0, 1.0}), make_vector({1.0, 1.0})});
  const NormalCone c2 = normal_cone(box, make_vector({0.0, 0.0}));
  CHECK(c2.is_subspace());
  CHECK(c2.lineality.dim() == 0);

  // singleton: all of R^n
  const Polytope single({make_vector({2.0, 0.0})});
  const NormalCone c3 = normal_cone(single, make_vector({2.0, 0.0}));
  CHECK(c3.is_subspace());
  CHECK(c3.lineality.dim() == 2);

  // segment endpoint: lineality plus one outward ray (diagnostics)
  const NormalCone c4 = normal_cone(seg, make_vector({0.0, 1.0}));
  CHECK_FALSE(c4.is_subspace());
  REQUIRE(c4.rays.size() == 1);
  CHECK(c4.rays[0][1] == doctest::Approx(1.0));

  // box corner: two outward rays spanning the quadrant cone
  const NormalCone c5 = normal_cone(box, make_vector({1.0, 1.0}));
  CHECK_FALSE(c5.is_subspace());
  CHECK(c5.lineality.dim() == 0);
  REQUIRE(c5.rays.size() == 2);
  for (const auto& ray : c5.rays) {
    CHECK(ray[0] >= -1e-12);
    CHECK(ray[1] >= -1e-12);
  }

  CHECK_THROWS_AS(normal_cone(seg, make_vector({0.3, 0.0})),
                  PreconditionViolation);
}

TEST_CASE("normal cone is constant across relative-interior points") {
  Polytope seg = segment(-1.0, 2.0);
  seg.synthesize_facets();
  const Subspace V = span_of_differences(seg, seg.generators()[0]);
  const Polytope ri = epsilon_relative_interior(seg, V, 0.3);
  Rng rng(13);
  const auto pts = sample_hull(ri, 8, rng, 0.0);
  const NormalCone base = normal_cone(seg, pts[0]);
  for (const auto& p : pts) {
    const NormalCone c = normal_cone(seg, p);
    REQUIRE(c.is_subspace());
    CHECK(max_principal_angle(base.lineality, c.lineality) <= 1e-8);
  }
}

TEST_CASE("H-representation and V-representation agree") {
  Polytope box({make_vector({-1.0, -1.0}), make_vector({1.0, -1.0}),
                make_vector({-1.0, 1.0}), make_vector({1.0, 1.0})});
  box.synthesize_facets();
  // support functions agree on random directions, and the vertex sets of the
  // two representations coincide as hulls
  Rng rng(17);
  const auto verts = box.hrep_vertices();
  const Polytope from_h(verts);
  for (int i = 0; i < 64; ++i) {
    const VectorXd d = rng.on_sphere(2);
    CHECK(std::abs(box.support(d) - from_h.support(d)) <= 1e-10);
  }
  CHECK(box.hausdorff_distance(from_h) <= 1e-10);
  // facet satisfaction with slack
  for (const auto& f : box.facets())
    for (const auto& g : box.generators())
      CHECK(f.normal.dot(g) <= f.offset + 1e-12);
}

TEST_CASE("hull projection matches a brute-force oracle") {
  const Polytope tri({make_vector({0.0, 0.0}), make_vector({2.0, 0.0}),
                      make_vector({0.0, 1.0})});
  Rng rng(19);
  for (int i = 0; i < 40; ++i) {
    const VectorXd x = 3.0 * rng.gaussian_vector(2);
    const double exact = tri.distance(x);
    const double oracle = hull_distance_oracle(tri, x);
    CHECK(exact <= oracle + 1e-9);
    CHECK(exact >= oracle - 2e-2);  // oracle grid is coarse
  }
}

TEST_CASE("polytope facet validation rejects bad generator lists") {
  std::vector<Facet> facets{{make_vector({0.0, 1.0}), 0.5}};
  CHECK_THROWS_AS(Polytope({make_vector({0.0, 1.0})}, facets),
                  InvariantViolation);
}
