#pragma once

#include <memory>
#include <string>
#include <vector>

#include "uvlag/numerics.hpp"

namespace uvlag {

/// A closed set with exact membership and an exact normal-cone oracle, plus a
/// deterministic sampler of points in the set (boundary-biased, since the
/// prox-regularity inequalities are tight there). Normal cones are reported
/// through unit ray generators; at interior points the cone is {0} and the
/// list is empty.
class SetDescr {
 public:
  virtual ~SetDescr() = default;
  virtual const std::string& name() const = 0;
  virtual int dim() const = 0;
  virtual bool contains(const VectorXd& x, double tol = 1e-12) const = 0;
  /// Unit generators of the normal cone at x (empty at interior points).
  virtual std::vector<VectorXd> unit_normals(const VectorXd& x) const = 0;
  /// Deterministic sample driven by a low-discrepancy index. Even indices
  /// land on the boundary, odd indices inside; the result may fall outside
  /// the requested ball (callers filter).
  virtual VectorXd sample_point(std::uint64_t index, const VectorXd& center,
                                double radius) const = 0;
};

std::shared_ptr<const SetDescr> make_halfspace();         // {x : x2 <= 0} in R^2
std::shared_ptr<const SetDescr> make_box01();             // [0,1]^2
std::shared_ptr<const SetDescr> make_disk_complement();   // {x : ||x|| >= 1}
std::shared_ptr<const SetDescr> make_parabola_epigraph(); // {x : x2 >= x1^2}
std::shared_ptr<const SetDescr> make_interval01();        // [0,1] in R^1
std::shared_ptr<const SetDescr> make_point_set();         // {0} in R^1

/// Lookup by name ("halfspace", "box", "disk-complement", "parabola-epigraph").
std::shared_ptr<const SetDescr> set_catalog(const std::string& name);
const std::vector<std::string>& set_catalog_names();

/// Cartesian product D x E with componentwise oracles.
std::shared_ptr<const SetDescr> make_product(
    std::shared_ptr<const SetDescr> D, std::shared_ptr<const SetDescr> E);

}  // namespace uvlag
