#include "uvlag/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uvlag {

namespace {

constexpr double kFacetSlack = 1e-12;
constexpr double kMemberTol = 1e-10;

bool lex_less(const VectorXd& a, const VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-12) return true;
    if (a[i] > b[i] + 1e-12) return false;
  }
  return false;
}

// Vertex enumeration of {t : alpha_i . t <= beta_i} for t in R^p, p <= 2.
// Returns an empty list when infeasible.
struct PlaneSystem {
  std::vector<VectorXd> alphas;  // p-dimensional
  std::vector<double> betas;
};

std::vector<VectorXd> enumerate_plane_vertices(const PlaneSystem& sys, int p) {
  const double feas_tol = 1e-9;
  std::vector<VectorXd> verts;
  auto feasible = [&](const VectorXd& t) {
    for (size_t i = 0; i < sys.alphas.size(); ++i)
      if (sys.alphas[i].dot(t) > sys.betas[i] + feas_tol) return false;
    return true;
  };
  if (p == 0) {
    VectorXd t(0);
    // all constraints are 0 <= beta_i
    for (size_t i = 0; i < sys.alphas.size(); ++i)
      if (sys.betas[i] < -feas_tol) return {};
    verts.push_back(t);
    return verts;
  }
  if (p == 1) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < sys.alphas.size(); ++i) {
      const double a = sys.alphas[i][0], b = sys.betas[i];
      if (std::abs(a) < 1e-13) {
        if (b < -feas_tol) return {};
        continue;
      }
      if (a > 0.0)
        hi = std::min(hi, b / a);
      else
        lo = std::max(lo, b / a);
    }
    if (lo > hi + feas_tol) return {};
    const double mid = 0.5 * (lo + hi);
    VectorXd t(1);
    t[0] = std::min(lo, mid);
    verts.push_back(t);
    if (hi - lo > 1e-12) {
      t[0] = hi;
      verts.push_back(t);
    }
    return verts;
  }
  // p == 2: intersect all facet pairs.
  const size_t m = sys.alphas.size();
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      Eigen::Matrix2d A;
      A.row(0) = sys.alphas[i].transpose();
      A.row(1) = sys.alphas[j].transpose();
      if (std::abs(A.determinant()) < 1e-12) continue;
      Eigen::Vector2d b(sys.betas[i], sys.betas[j]);
      const Eigen::Vector2d t = A.partialPivLu().solve(b);
      VectorXd tv(2);
      tv << t[0], t[1];
      if (feasible(tv)) verts.push_back(tv);
    }
  }
  // dedupe
  std::vector<VectorXd> unique;
  for (const auto& v : verts) {
    bool seen = false;
    for (const auto& u : unique)
      if ((u - v).norm() <= 1e-9) {
        seen = true;
        break;
      }
    if (!seen) unique.push_back(v);
  }
  std::sort(unique.begin(), unique.end(), lex_less);
  return unique;
}

// 2D convex hull, counterclockwise (Andrew monotone chain).
std::vector<Eigen::Vector2d> hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return (a - b).norm() <= 1e-12;
                        }),
            pts.end());
  const auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                        const Eigen::Vector2d& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  const size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Eigen::Vector2d> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
    h[k++] = pts[i];
  }
  for (size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

Polytope::Polytope(std::vector<VectorXd> generators)
    : generators_(std::move(generators)) {
  validate();
}

Polytope::Polytope(std::vector<VectorXd> generators, std::vector<Facet> facets)
    : generators_(std::move(generators)), facets_(std::move(facets)) {
  validate();
}

void Polytope::validate() const {
  if (generators_.empty())
    throw InvariantViolation("polytope requires a nonempty generator list");
  const int n = static_cast<int>(generators_[0].size());
  for (const auto& g : generators_)
    if (g.size() != n) throw InvariantViolation("generator dimension mismatch");
  if (facets_) {
    for (const auto& f : *facets_) {
      for (const auto& g : generators_) {
        if (f.normal.dot(g) > f.offset + kFacetSlack)
          throw InvariantViolation(
              "generator violates a facet beyond 1e-12 slack");
      }
    }
  }
}

const std::vector<Facet>& Polytope::facets() const {
  if (!facets_) throw PreconditionViolation("polytope has no H-representation");
  return *facets_;
}

double Polytope::support(const VectorXd& dir) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : generators_) best = std::max(best, g.dot(dir));
  return best;
}

VectorXd Polytope::centroid() const {
  VectorXd c = VectorXd::Zero(ambient_dim());
  for (const auto& g : generators_) c += g;
  return c / static_cast<double>(generators_.size());
}

VectorXd Polytope::project(const VectorXd& x) const {
  const int n = ambient_dim();
  const int k = static_cast<int>(generators_.size());
  if (k > 12)
    throw PreconditionViolation("hull projection supports at most 12 generators");
  const int max_size = std::min(k, n + 1);
  double best_dist = std::numeric_limits<double>::infinity();
  VectorXd best = generators_[0];
  // Faces of every size up to n+1 (Caratheodory); unconstrained affine
  // minimizer accepted when its barycentric coordinates are nonnegative.
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size > max_size) continue;
    std::vector<int> idx;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const VectorXd& p0 = generators_[idx[0]];
    if (size == 1) {
      const double d = (x - p0).norm();
      if (d < best_dist - 1e-15) {
        best_dist = d;
        best = p0;
      }
      continue;
    }
    MatrixXd M(n, size - 1);
    for (int j = 1; j < size; ++j) M.col(j - 1) = generators_[idx[j]] - p0;
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(M);
    const VectorXd c = cod.solve(x - p0);
    double lam0 = 1.0 - c.sum();
    bool ok = lam0 >= -1e-12;
    for (int j = 0; j < c.size() && ok; ++j) ok = c[j] >= -1e-12;
    if (!ok) continue;
    const VectorXd y = p0 + M * c;
    const double d = (x - y).norm();
    if (d < best_dist - 1e-15) {
      best_dist = d;
      best = y;
    }
  }
  return best;
}

void Polytope::synthesize_facets() {
  if (facets_) return;
  const int n = ambient_dim();
  const VectorXd& g0 = generators_[0];
  MatrixXd diffs(n, static_cast<int>(generators_.size()));
  for (size_t i = 0; i < generators_.size(); ++i)
    diffs.col(static_cast<int>(i)) = generators_[i] - g0;
  const Subspace span = Subspace::from_span(diffs);
  const int p = span.dim();
  if (p > 2)
    throw PreconditionViolation(
        "facet synthesis supports relative dimension <= 2");
  std::vector<Facet> fs;
  // paired equalities for the orthogonal directions
  const Subspace comp = span.orthogonal_complement();
  for (int c = 0; c < comp.dim(); ++c) {
    const VectorXd w = comp.basis().col(c);
    fs.push_back({w, w.dot(g0)});
    fs.push_back({-w, -w.dot(g0)});
  }
  if (p == 1) {
    const VectorXd d = span.basis().col(0);
    double tmin = 0.0, tmax = 0.0;
    for (const auto& g : generators_) {
      const double t = d.dot(g - g0);
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
    }
    fs.push_back({d, d.dot(g0) + tmax});
    fs.push_back({-d, -(d.dot(g0) + tmin)});
  } else if (p == 2) {
    const VectorXd d1 = span.basis().col(0), d2 = span.basis().col(1);
    std::vector<Eigen::Vector2d> pts;
    for (const auto& g : generators_)
      pts.emplace_back(d1.dot(g - g0), d2.dot(g - g0));
    const auto hull = hull_2d(pts);
    for (size_t i = 0; i < hull.size(); ++i) {
      const Eigen::Vector2d a = hull[i];
      const Eigen::Vector2d b = hull[(i + 1) % hull.size()];
      Eigen::Vector2d edge = b - a;
      // outward normal of a CCW polygon edge
      Eigen::Vector2d nrm(edge[1], -edge[0]);
      const double len = nrm.norm();
      if (len < 1e-13) continue;
      nrm /= len;
      const VectorXd amb = nrm[0] * d1 + nrm[1] * d2;
      double off = -std::numeric_limits<double>::infinity();
      for (const auto& g : generators_) off = std::max(off, amb.dot(g));
      fs.push_back({amb, off});
    }
  }
  facets_ = std::move(fs);
  validate();
}

std::vector<VectorXd> Polytope::hrep_vertices() const {
  const auto& fs = facets();
  const VectorXd& g0 = generators_[0];
  MatrixXd diffs(ambient_dim(), static_cast<int>(generators_.size()));
  for (size_t i = 0; i < generators_.size(); ++i)
    diffs.col(static_cast<int>(i)) = generators_[i] - g0;
  const Subspace span = Subspace::from_span(diffs);
  const int p = span.dim();
  if (p > 2)
    throw PreconditionViolation("vertex enumeration supports relative dim <= 2");
  PlaneSystem sys;
  for (const auto& f : fs) {
    VectorXd alpha(p);
    for (int c = 0; c < p; ++c) alpha[c] = span.basis().col(c).dot(f.normal);
    sys.alphas.push_back(alpha);
    sys.betas.push_back(f.offset - f.normal.dot(g0));
  }
  std::vector<VectorXd> out;
  for (const auto& t : enumerate_plane_vertices(sys, p))
    out.push_back(g0 + span.embed(t));
  return out;
}

double Polytope::hausdorff_distance(const Polytope& other) const {
  double d = 0.0;
  for (const auto& g : generators_) d = std::max(d, other.distance(g));
  for (const auto& g : other.generators()) d = std::max(d, distance(g));
  return d;
}

Subspace span_of_differences(const Polytope& P, const VectorXd& gtilde) {
  if (P.distance(gtilde) > kMemberTol)
    throw PreconditionViolation(
        "gtilde is not a member of the polytope (tolerance 1e-10)");
  MatrixXd diffs(P.ambient_dim(), static_cast<int>(P.generators().size()));
  for (size_t i = 0; i < P.generators().size(); ++i)
    diffs.col(static_cast<int>(i)) = P.generators()[i] - gtilde;
  return Subspace::from_span(diffs);
}

namespace {

// Shrunk plane system of P along V for a given eps; reused by the
// relative-interior op and the feasibility bisection.
struct ShrinkContext {
  VectorXd g0;
  Subspace span;  // affine-hull directions of P
  std::vector<Facet> shrunk;
};

ShrinkContext shrink_facets(const Polytope& P, const Subspace& V, double eps) {
  Polytope work = P;
  work.synthesize_facets();
  ShrinkContext ctx{work.generators()[0],
                    span_of_differences(work, work.generators()[0]),
                    {}};
  for (const auto& f : work.facets()) {
    const double shrink = eps * V.project(f.normal).norm();
    ctx.shrunk.push_back({f.normal, f.offset - shrink});
  }
  return ctx;
}

std::vector<VectorXd> shrunk_vertices(const ShrinkContext& ctx) {
  const int p = ctx.span.dim();
  PlaneSystem sys;
  for (const auto& f : ctx.shrunk) {
    VectorXd alpha(p);
    for (int c = 0; c < p; ++c)
      alpha[c] = ctx.span.basis().col(c).dot(f.normal);
    sys.alphas.push_back(alpha);
    sys.betas.push_back(f.offset - f.normal.dot(ctx.g0));
  }
  std::vector<VectorXd> out;
  for (const auto& t : enumerate_plane_vertices(sys, p))
    out.push_back(ctx.g0 + ctx.span.embed(t));
  return out;
}

}  // namespace

double max_feasible_epsilon(const Polytope& P, const Subspace& V) {
  if (V.dim() == 0) return std::numeric_limits<double>::infinity();
  double diameter = 0.0;
  for (const auto& a : P.generators())
    for (const auto& b : P.generators())
      diameter = std::max(diameter, (a - b).norm());
  double lo = 0.0, hi = diameter + 1.0;
  auto feasible = [&](double eps) {
    return !shrunk_vertices(shrink_facets(P, V, eps)).empty();
  };
  if (feasible(hi)) return hi;  // cannot happen for a bounded P with V-dim >= 1
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

Polytope epsilon_relative_interior(const Polytope& P, const Subspace& V,
                                   double eps) {
  if (eps <= 0.0) throw PreconditionViolation("eps must be positive");
  if (V.dim() == 0) return P;  // B_V(0,eps) = {0}: the condition is vacuous
  const ShrinkContext ctx = shrink_facets(P, V, eps);
  auto verts = shrunk_vertices(ctx);
  if (verts.empty()) {
    const double max_eps = max_feasible_epsilon(P, V);
    throw EpsilonTooLarge("epsilon too large: shrunk set is empty", max_eps);
  }
  return Polytope(std::move(verts), ctx.shrunk);
}

NormalCone normal_cone(const Polytope& P, const VectorXd& g0) {
  if (P.distance(g0) > kMemberTol)
    throw PreconditionViolation("g0 is not a member of the polytope");
  const int n = P.ambient_dim();
  std::vector<VectorXd> diffs;
  for (const auto& g : P.generators()) {
    const VectorXd d = g - g0;
    if (d.norm() > 1e-12) diffs.push_back(d);
  }
  MatrixXd D(n, static_cast<int>(diffs.size()));
  for (size_t i = 0; i < diffs.size(); ++i) D.col(static_cast<int>(i)) = diffs[i];
  const Subspace span = Subspace::from_span(D);
  const Subspace lin = span.orthogonal_complement();
  const int q = span.dim();
  if (q == 0) return {lin, {}};
  if (q == 1) {
    const VectorXd d = span.basis().col(0);
    bool pos = false, neg = false;
    for (const auto& diff : diffs) {
      const double t = d.dot(diff);
      if (t > 1e-12) pos = true;
      if (t < -1e-12) neg = true;
    }
    if (pos && neg) return {lin, {}};
    const double sign = pos ? -1.0 : 1.0;  // block the occupied side
    return {lin, {sign * d}};
  }
  if (q == 2) {
    const VectorXd d1 = span.basis().col(0), d2 = span.basis().col(1);
    std::vector<double> angles;
    for (const auto& diff : diffs)
      angles.push_back(std::atan2(d2.dot(diff), d1.dot(diff)));
    std::sort(angles.begin(), angles.end());
    double max_gap = 0.0;
    double gap_start = 0.0;
    for (size_t i = 0; i < angles.size(); ++i) {
      const double next =
          (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + 2.0 * M_PI;
      const double gap = next - angles[i];
      if (gap > max_gap) {
        max_gap = gap;
        gap_start = angles[i];
      }
    }
    if (max_gap < M_PI - 1e-12) return {lin, {}};
    const double phi1 = gap_start + M_PI / 2.0;
    const double phi2 = gap_start + max_gap - M_PI / 2.0;
    auto ray = [&](double phi) {
      return (std::cos(phi) * d1 + std::sin(phi) * d2).eval();
    };
    std::vector<VectorXd> rays{ray(phi1)};
    if (std::abs(phi2 - phi1) > 1e-12) rays.push_back(ray(phi2));
    return {lin, rays};
  }
  throw PreconditionViolation("normal cone supports relative dimension <= 2");
}

std::vector<VectorXd> sample_hull(const Polytope& P, int count, Rng& rng,
                                  double shrink) {
  std::vector<VectorXd> out;
  const VectorXd c = P.centroid();
  out.push_back(c);
  const int k = static_cast<int>(P.generators().size());
  while (static_cast<int>(out.size()) < count) {
    // Dirichlet(1) mixture weights via normalized exponentials
    VectorXd w(k);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
      w[i] = -std::log(std::max(rng.uniform01(), 1e-300));
      sum += w[i];
    }
    VectorXd g = VectorXd::Zero(P.ambient_dim());
    for (int i = 0; i < k; ++i) g += (w[i] / sum) * P.generators()[i];
    out.push_back(c + (1.0 - shrink) * (g - c));
  }
  return out;
}

}  // namespace uvlag
