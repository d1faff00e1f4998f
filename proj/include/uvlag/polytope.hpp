#pragma once

#include <optional>
#include <vector>

#include "uvlag/geometry.hpp"

namespace uvlag {

/// One halfspace a . x <= b.
struct Facet {
  VectorXd normal;
  double offset;
};

/// A convex polytope given by generators (V-representation) and, optionally,
/// facets (H-representation). Generators of all catalog subdifferentials have
/// relative dimension <= 2, and facet synthesis and vertex enumeration are
/// implemented for that range.
class Polytope {
 public:
  explicit Polytope(std::vector<VectorXd> generators);
  Polytope(std::vector<VectorXd> generators, std::vector<Facet> facets);

  const std::vector<VectorXd>& generators() const { return generators_; }
  bool has_facets() const { return facets_.has_value(); }
  const std::vector<Facet>& facets() const;
  int ambient_dim() const { return static_cast<int>(generators_[0].size()); }

  /// Support function max_g <g, dir> over the generators.
  double support(const VectorXd& dir) const;

  /// Mean of the generator list.
  VectorXd centroid() const;

  /// Nearest point of the convex hull (exact, by face enumeration;
  /// generator count is capped at 12).
  VectorXd project(const VectorXd& x) const;
  double distance(const VectorXd& x) const { return (x - project(x)).norm(); }
  bool contains(const VectorXd& x, double tol = 1e-10) const {
    return distance(x) <= tol;
  }

  /// Build the H-representation in place if absent. Supported for relative
  /// dimension <= 2; throws otherwise. Orthogonal-complement directions are
  /// emitted as paired inequalities.
  void synthesize_facets();

  /// Vertices of the facet system (relative dimension <= 2). Used by the
  /// cross-representation checks.
  std::vector<VectorXd> hrep_vertices() const;

  /// Largest distance from any point of `other`'s hull to this hull and
  /// vice versa, approximated exactly on generators (valid for polytopes:
  /// the Hausdorff distance between hulls is attained at vertices on at
  /// least one side; both directions are taken for symmetry).
  double hausdorff_distance(const Polytope& other) const;

 private:
  void validate() const;
  std::vector<VectorXd> generators_;
  std::optional<std::vector<Facet>> facets_;
};

/// Orthonormal basis of span{g - gtilde : g generator}. `gtilde` must lie in
/// the polytope (membership tolerance 1e-10).
Subspace span_of_differences(const Polytope& P, const VectorXd& gtilde);

/// The set {g : a_i . g + eps * ||P_V a_i|| <= b_i for all facets i}, i.e. the
/// facet-offset shrink of P along V. For V = {0} this is P itself. Throws
/// EpsilonTooLarge (carrying the max feasible eps) when the result is empty.
Polytope epsilon_relative_interior(const Polytope& P, const Subspace& V, double eps);

/// Supremum of eps for which epsilon_relative_interior is nonempty
/// (+infinity when V = {0}). Bisection to ~1e-12.
double max_feasible_epsilon(const Polytope& P, const Subspace& V);

/// Normal cone of the hull at g0. At relative-interior points the cone is a
/// linear subspace and `rays` is empty; at boundary points the generating
/// rays (unit length) are reported for diagnostics.
struct NormalCone {
  Subspace lineality;
  std::vector<VectorXd> rays;
  bool is_subspace() const { return rays.empty(); }
};

NormalCone normal_cone(const Polytope& P, const VectorXd& g0);

/// Deterministic interior-leaning samples of the hull: the centroid followed
/// by random convex mixtures pulled toward the centroid by `shrink`.
std::vector<VectorXd> sample_hull(const Polytope& P, int count, Rng& rng,
                                  double shrink = 0.0);

}  // namespace uvlag
