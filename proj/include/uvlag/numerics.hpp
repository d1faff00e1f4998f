#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace uvlag {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ----------------------------------------------------------------------------
// Deterministic sampling.
//
// std::uniform_real_distribution / std::normal_distribution are
// implementation-defined, so all conversions from raw engine output to
// doubles are spelled out here. Same seed, same stream, on every platform
// with the same mt19937_64.
// ----------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed ^ 0x9e3779b97f4a7c15ull) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Box-Muller; one fresh pair per call, second value discarded.
  double gaussian() {
    const double u1 = std::max(uniform01(), 1e-300);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  VectorXd gaussian_vector(int n) {
    VectorXd g(n);
    for (int i = 0; i < n; ++i) g[i] = gaussian();
    return g;
  }

  VectorXd on_sphere(int n) {
    if (n == 0) return VectorXd(0);
    VectorXd g = gaussian_vector(n);
    double nrm = g.norm();
    while (nrm < 1e-12) {
      g = gaussian_vector(n);
      nrm = g.norm();
    }
    return g / nrm;
  }

  /// Uniform in the closed ball (direction * radius * u^(1/n); no rejection).
  VectorXd in_ball(const VectorXd& center, double radius) {
    const int n = static_cast<int>(center.size());
    if (n == 0) return VectorXd(0);
    const VectorXd dir = on_sphere(n);
    const double r = radius * std::pow(uniform01(), 1.0 / n);
    return center + r * dir;
  }

 private:
  std::mt19937_64 gen_;
};

// ----------------------------------------------------------------------------
// Halton low-discrepancy sequence. A seed offsets the start index so that
// distinct seeds give distinct (still deterministic) streams.
// ----------------------------------------------------------------------------

inline double halton_radical_inverse(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

class HaltonSampler {
 public:
  HaltonSampler(int dim, std::uint64_t seed)
      : dim_(dim), next_(1 + seed * 7919ull) {}

  /// Next point in the unit cube [0,1)^dim.
  VectorXd next_unit() {
    static constexpr std::uint64_t primes[8] = {2, 3, 5, 7, 11, 13, 17, 19};
    VectorXd p(dim_);
    for (int d = 0; d < dim_; ++d) p[d] = halton_radical_inverse(next_, primes[d]);
    ++next_;
    return p;
  }

  /// Next point in the axis-aligned box center +/- radius.
  VectorXd next_in_box(const VectorXd& center, double radius) {
    const VectorXd u = next_unit();
    VectorXd p(dim_);
    for (int d = 0; d < dim_; ++d) p[d] = center[d] + radius * (2.0 * u[d] - 1.0);
    return p;
  }

  /// Next point in the closed ball (box sampling + rejection).
  VectorXd next_in_ball(const VectorXd& center, double radius) {
    if (dim_ == 0) return VectorXd(0);
    for (;;) {
      const VectorXd p = next_in_box(center, radius);
      if ((p - center).norm() <= radius) return p;
    }
  }

  std::uint64_t cursor() const { return next_; }

 private:
  int dim_;
  std::uint64_t next_;
};

// ----------------------------------------------------------------------------
// Finite differences.
// ----------------------------------------------------------------------------

inline VectorXd central_gradient(const std::function<double(const VectorXd&)>& f,
                                 const VectorXd& x, double h) {
  VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline MatrixXd central_jacobian(const std::function<VectorXd(const VectorXd&)>& f,
                                 const VectorXd& x, double h, int out_dim) {
  MatrixXd jac(out_dim, x.size());
  for (int i = 0; i < x.size(); ++i) {
    VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

inline VectorXd make_vector(std::initializer_list<double> vals) {
  VectorXd v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

}  // namespace uvlag
