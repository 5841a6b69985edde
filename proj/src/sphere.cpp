// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphex/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "sphex/error.hpp"

namespace sphex {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;

// Value and derivative of P_n at x.
void legendre_with_derivative(int n, double x, double& p, double& dp) {
  double prev = 1.0;
  double cur = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  p = cur;
  dp = n * (x * cur - prev) / (x * x - 1.0);
}

// P-bar_lm(t) for a single order, with the starting value P-bar_mm carried as
// mantissa * 2^exponent.
double normalized_legendre(int l, int m, double t) {
  const double s = std::sqrt((1.0 - t) * (1.0 + t));
  if (m > 0 && s == 0.0) return 0.0;

  int exponent = 0;
  double pmm = std::frexp(1.0 / std::sqrt(kFourPi), &exponent);
  for (int k = 1; k <= m; ++k) {
    int e = 0;
    pmm = std::frexp(-pmm * s * std::sqrt((2.0 * k + 1.0) / (2.0 * k)), &e);
    exponent += e;
  }
  if (l == m) return std::ldexp(pmm, exponent);

  double prev = pmm;
  double cur = t * std::sqrt(2.0 * m + 3.0) * pmm;
  for (int k = m + 2; k <= l; ++k) {
    const double kk = static_cast<double>(k);
    const double mm = static_cast<double>(m);
    const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - mm * mm));
    const double b = std::sqrt(((kk - 1.0) * (kk - 1.0) - mm * mm) / (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0));
    const double next = a * (t * cur - b * prev);
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag > 0x1p500 || (mag < 0x1p-500 && mag != 0.0)) {
      int e = 0;
      std::frexp(cur, &e);
      cur = std::ldexp(cur, -e);
      prev = std::ldexp(prev, -e);
      exponent += e;
    }
  }
  return std::ldexp(cur, exponent);
}

}  // namespace

GaussLegendreRule gauss_legendre_rule(int n) {
  if (n < 1) throw DomainError("gauss_legendre_rule: n must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p = 0.0;
    double dp = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      legendre_with_derivative(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 4e-16 * std::max(1.0, std::abs(x))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw std::runtime_error("gauss_legendre_rule: Newton iteration did not converge for n = " +
                               std::to_string(n));
    }
    if (2 * i + 1 == n) x = 0.0;
    legendre_with_derivative(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  return rule;
}

std::shared_ptr<const GaussLegendreRule> cached_gauss_legendre_rule(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GaussLegendreRule>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const GaussLegendreRule>(gauss_legendre_rule(n));
  std::lock_guard lock(mutex);
  return cache.emplace(n, std::move(rule)).first->second;
}

GridPoint SphereQuadrature::point(std::size_t index) const {
  const std::size_t ring = index / n_lon_;
  const std::size_t k = index % n_lon_;
  return {theta_[ring], static_cast<double>(k) * lon_step_, point_weights_[index]};
}

std::size_t SphereQuadrature::antipode(std::size_t index) const {
  const std::size_t ring = index / n_lon_;
  const std::size_t k = index % n_lon_;
  return (n_lat() - 1 - ring) * n_lon_ + (k + n_lon_ / 2) % n_lon_;
}

double SphereQuadrature::integrate(std::span<const double> values) const {
  if (values.size() != size()) throw DomainError("SphereQuadrature::integrate: size mismatch");
  double total = 0.0;
  for (std::size_t ring = 0; ring < n_lat(); ++ring) {
    double row = 0.0;
    for (std::size_t k = 0; k < n_lon_; ++k) row += values[ring * n_lon_ + k];
    total += row * colat_weights_[ring];
  }
  return total * lon_step_;
}

SphereQuadrature build_quadrature(int band_limit, int max_band_limit) {
  if (band_limit < 0) throw DomainError("build_quadrature: negative band limit");
  if (band_limit > max_band_limit) {
    throw ResourceError("build_quadrature: band limit " + std::to_string(band_limit) +
                        " exceeds maximum " + std::to_string(max_band_limit));
  }
  SphereQuadrature q;
  q.band_limit_ = band_limit;
  const int n_lat = band_limit + 1;
  std::size_t n_lon = static_cast<std::size_t>(2 * band_limit + 1);
  if (n_lon % 2 != 0) ++n_lon;
  q.n_lon_ = n_lon;
  q.lon_step_ = 2.0 * kPi / static_cast<double>(n_lon);

  const auto rule = cached_gauss_legendre_rule(n_lat);
  q.cos_theta_.resize(n_lat);
  q.theta_.resize(n_lat);
  q.colat_weights_.resize(n_lat);
  for (int j = 0; j < n_lat; ++j) {
    const int src = n_lat - 1 - j;
    q.cos_theta_[j] = rule->nodes[src];
    q.theta_[j] = std::acos(rule->nodes[src]);
    q.colat_weights_[j] = rule->weights[src];
  }
  q.point_weights_.resize(static_cast<std::size_t>(n_lat) * n_lon);
  for (int j = 0; j < n_lat; ++j) {
    for (std::size_t k = 0; k < n_lon; ++k) {
      q.point_weights_[j * n_lon + k] = q.colat_weights_[j] * q.lon_step_;
    }
  }
  return q;
}

void normalized_legendre_row(int l, double t, std::span<double> out) {
  if (l < 0) throw DomainError("normalized_legendre_row: negative degree");
  if (out.size() < static_cast<std::size_t>(l + 1)) {
    throw DomainError("normalized_legendre_row: output span too small");
  }
  t = std::clamp(t, -1.0, 1.0);
  for (int m = 0; m <= l; ++m) out[m] = normalized_legendre(l, m, t);
}

std::complex<double> eval_ylm(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw DomainError("eval_ylm: require |m| <= l");
  const int am = std::abs(m);
  const double p = normalized_legendre(l, am, std::clamp(std::cos(theta), -1.0, 1.0));
  const std::complex<double> y(p * std::cos(am * phi), p * std::sin(am * phi));
  if (m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

Vec3 unit_vector(double theta, double phi) {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

}  // namespace sphex
