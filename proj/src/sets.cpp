#include "uvlag/sets.hpp"

#include <cmath>
#include <map>

#include "uvlag/errors.hpp"

namespace uvlag {

namespace {

class Halfspace final : public SetDescr {
 public:
  const std::string& name() const override {
    static const std::string n = "halfspace";
    return n;
  }
  int dim() const override { return 2; }
  bool contains(const VectorXd& x, double tol) const override {
    return x[1] <= tol;
  }
  std::vector<VectorXd> unit_normals(const VectorXd& x) const override {
    if (std::abs(x[1]) <= 1e-12) return {make_vector({0.0, 1.0})};
    return {};
  }
  VectorXd sample_point(std::uint64_t index, const VectorXd& center,
                        double radius) const override {
    VectorXd p(2);
    p[0] = center[0] + radius * (2.0 * halton_radical_inverse(index + 1, 2) - 1.0);
    if (index % 2 == 0) {
      p[1] = 0.0;
    } else {
      const double t = halton_radical_inverse(index + 1, 3);
      p[1] = std::min(center[1], 0.0) - radius * t;
    }
    return p;
  }
};

class Box01 final : public SetDescr {
 public:
  const std::string& name() const override {
    static const std::string n = "box";
    return n;
  }
  int dim() const override { return 2; }
  bool contains(const VectorXd& x, double tol) const override {
    return x[0] >= -tol && x[0] <= 1.0 + tol && x[1] >= -tol && x[1] <= 1.0 + tol;
  }
  std::vector<VectorXd> unit_normals(const VectorXd& x) const override {
    std::vector<VectorXd> dirs;
    if (std::abs(x[0]) <= 1e-12) dirs.push_back(make_vector({-1.0, 0.0}));
    if (std::abs(x[0] - 1.0) <= 1e-12) dirs.push_back(make_vector({1.0, 0.0}));
    if (std::abs(x[1]) <= 1e-12) dirs.push_back(make_vector({0.0, -1.0}));
    if (std::abs(x[1] - 1.0) <= 1e-12) dirs.push_back(make_vector({0.0, 1.0}));
    return dirs;
  }
  VectorXd sample_point(std::uint64_t index, const VectorXd& center,
                        double radius) const override {
    VectorXd p(2);
    p[0] = center[0] + radius * (2.0 * halton_radical_inverse(index + 1, 2) - 1.0);
    p[1] = center[1] + radius * (2.0 * halton_radical_inverse(index + 1, 3) - 1.0);
    p[0] = std::clamp(p[0], 0.0, 1.0);
    p[1] = std::clamp(p[1], 0.0, 1.0);
    if (index % 2 == 0) {
      // snap the coordinate closest to a face
      const double d0 = std::min(p[0], 1.0 - p[0]);
      const double d1 = std::min(p[1], 1.0 - p[1]);
      if (d0 <= d1)
        p[0] = (p[0] <= 0.5) ? 0.0 : 1.0;
      else
        p[1] = (p[1] <= 0.5) ? 0.0 : 1.0;
    }
    return p;
  }
};

class DiskComplement final : public SetDescr {
 public:
  const std::string& name() const override {
    static const std::string n = "disk-complement";
    return n;
  }
  int dim() const override { return 2; }
  bool contains(const VectorXd& x, double tol) const override {
    return x.norm() >= 1.0 - tol;
  }
  std::vector<VectorXd> unit_normals(const VectorXd& x) const override {
    if (std::abs(x.norm() - 1.0) <= 1e-12) return {(-x / x.norm()).eval()};
    return {};
  }
  VectorXd sample_point(std::uint64_t index, const VectorXd& center,
                        double radius) const override {
    VectorXd p(2);
    p[0] = center[0] + radius * (2.0 * halton_radical_inverse(index + 1, 2) - 1.0);
    p[1] = center[1] + radius * (2.0 * halton_radical_inverse(index + 1, 3) - 1.0);
    const double nrm = p.norm();
    if (index % 2 == 0 || nrm < 1.0) {
      if (nrm < 1e-12) return make_vector({1.0, 0.0});
      return p / nrm;  // radial projection onto the circle
    }
    return p;
  }
};

class ParabolaEpigraph final : public SetDescr {
 public:
  const std::string& name() const override {
    static const std::string n = "parabola-epigraph";
    return n;
  }
  int dim() const override { return 2; }
  bool contains(const VectorXd& x, double tol) const override {
    return x[1] >= x[0] * x[0] - tol;
  }
  std::vector<VectorXd> unit_normals(const VectorXd& x) const override {
    if (std::abs(x[1] - x[0] * x[0]) <= 1e-12) {
      VectorXd w = make_vector({2.0 * x[0], -1.0});
      return {(w / w.norm()).eval()};
    }
    return {};
  }
  VectorXd sample_point(std::uint64_t index, const VectorXd& center,
                        double radius) const override {
    const double t =
        center[0] + radius * (2.0 * halton_radical_inverse(index + 1, 2) - 1.0);
    if (index % 2 == 0) return make_vector({t, t * t});
    const double lift = radius * halton_radical_inverse(index + 1, 3);
    return make_vector({t, t * t + lift});
  }
};

class Interval01 final : public SetDescr {
 public:
  const std::string& name() const override {
    static const std::string n = "interval01";
    return n;
  }
  int dim() const override { return 1; }
  bool contains(const VectorXd& x, double tol) const override {
    return x[0] >= -tol && x[0] <= 1.0 + tol;
  }
  std::vector<VectorXd> unit_normals(const VectorXd& x) const override {
    std::vector<VectorXd> dirs;
    if (std::abs(x[0]) <= 1e-12) dirs.push_back(make_vector({-1.0}));
    if (std::abs(x[0] - 1.0) <= 1e-12) dirs.push_back(make_vector({1.0}));
    return dirs;
  }
  VectorXd sample_point(std::uint64_t index, const VectorXd& center,
                        double radius) const override {
    double t = center[0] + radius * (2.0 * halton_radical_inverse(index + 1, 2) - 1.0);
    return make_vector({std::clamp(t, 0.0, 1.0)});
  }
};

class PointSet final : public SetDescr {
 public:
  const std::string& name() const override {
    static const std::string n = "point";
    return n;
  }
  int dim() const override { return 1; }
  bool contains(const VectorXd& x, double tol) const override {
    return std::abs(x[0]) <= tol;
  }
  std::vector<VectorXd> unit_normals(const VectorXd& x) const override {
    if (std::abs(x[0]) <= 1e-12)
      return {make_vector({1.0}), make_vector({-1.0})};
    return {};
  }
  VectorXd sample_point(std::uint64_t, const VectorXd&, double) const override {
    return make_vector({0.0});
  }
};

class ProductSet final : public SetDescr {
 public:
  ProductSet(std::shared_ptr<const SetDescr> D, std::shared_ptr<const SetDescr> E)
      : D_(std::move(D)), E_(std::move(E)), name_(D_->name() + "x" + E_->name()) {}
  const std::string& name() const override { return name_; }
  int dim() const override { return D_->dim() + E_->dim(); }
  bool contains(const VectorXd& x, double tol) const override {
    return D_->contains(x.head(D_->dim()), tol) &&
           E_->contains(x.tail(E_->dim()), tol);
  }
  std::vector<VectorXd> unit_normals(const VectorXd& x) const override {
    // N_{DxE}(x,y) = N_D(x) x N_E(y); unit generators of the product cone are
    // the factor generators padded with zeros plus balanced diagonal mixes.
    const auto nd = D_->unit_normals(x.head(D_->dim()));
    const auto ne = E_->unit_normals(x.tail(E_->dim()));
    std::vector<VectorXd> out;
    auto lift_d = [&](const VectorXd& w) {
      VectorXd q = VectorXd::Zero(dim());
      q.head(D_->dim()) = w;
      return q;
    };
    auto lift_e = [&](const VectorXd& w) {
      VectorXd q = VectorXd::Zero(dim());
      q.tail(E_->dim()) = w;
      return q;
    };
    for (const auto& w : nd) out.push_back(lift_d(w));
    for (const auto& w : ne) out.push_back(lift_e(w));
    for (const auto& wd : nd)
      for (const auto& we : ne) {
        VectorXd q = VectorXd::Zero(dim());
        q.head(D_->dim()) = wd * M_SQRT1_2;
        q.tail(E_->dim()) = we * M_SQRT1_2;
        out.push_back(q);
      }
    return out;
  }
  VectorXd sample_point(std::uint64_t index, const VectorXd& center,
                        double radius) const override {
    VectorXd q(dim());
    q.head(D_->dim()) = D_->sample_point(index, center.head(D_->dim()), radius);
    q.tail(E_->dim()) =
        E_->sample_point(index / 2 + 1, center.tail(E_->dim()), radius);
    return q;
  }

 private:
  std::shared_ptr<const SetDescr> D_, E_;
  std::string name_;
};

}  // namespace

std::shared_ptr<const SetDescr> make_halfspace() {
  return std::make_shared<Halfspace>();
}
std::shared_ptr<const SetDescr> make_box01() { return std::make_shared<Box01>(); }
std::shared_ptr<const SetDescr> make_disk_complement() {
  return std::make_shared<DiskComplement>();
}
std::shared_ptr<const SetDescr> make_parabola_epigraph() {
  return std::make_shared<ParabolaEpigraph>();
}
std::shared_ptr<const SetDescr> make_interval01() {
  return std::make_shared<Interval01>();
}
std::shared_ptr<const SetDescr> make_point_set() {
  return std::make_shared<PointSet>();
}

std::shared_ptr<const SetDescr> set_catalog(const std::string& name) {
  static const std::map<std::string, std::shared_ptr<const SetDescr>> cat{
      {"halfspace", make_halfspace()},
      {"box", make_box01()},
      {"disk-complement", make_disk_complement()},
      {"parabola-epigraph", make_parabola_epigraph()},
  };
  const auto it = cat.find(name);
  if (it == cat.end()) throw PreconditionViolation("unknown set: " + name);
  return it->second;
}

const std::vector<std::string>& set_catalog_names() {
  static const std::vector<std::string> names{
      "halfspace", "box", "disk-complement", "parabola-epigraph"};
  return names;
}

std::shared_ptr<const SetDescr> make_product(std::shared_ptr<const SetDescr> D,
                                             std::shared_ptr<const SetDescr> E) {
  return std::make_shared<ProductSet>(std::move(D), std::move(E));
}

}  // namespace uvlag
