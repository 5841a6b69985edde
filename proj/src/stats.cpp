// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphex/error.hpp"
#include "sphex/specfun.hpp"

namespace sphex {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PowerSums {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
};

// Power sums of values shifted by c. k2..k4 are shift invariant, and centring
// near the mean keeps the quartic combinations well conditioned.
PowerSums power_sums(std::span<const double> x, double c) {
  PowerSums p;
  for (double v : x) {
    const double d = v - c;
    const double d2 = d * d;
    p.s1 += d;
    p.s2 += d2;
    p.s3 += d2 * d;
    p.s4 += d2 * d2;
  }
  return p;
}

double k2_from(const PowerSums& p, double n) { return (n * p.s2 - p.s1 * p.s1) / (n * (n - 1.0)); }

double k3_from(const PowerSums& p, double n) {
  return (2.0 * p.s1 * p.s1 * p.s1 - 3.0 * n * p.s1 * p.s2 + n * n * p.s3) / (n * (n - 1.0) * (n - 2.0));
}

double k4_from(const PowerSums& p, double n) {
  const double s1sq = p.s1 * p.s1;
  const double num = -6.0 * s1sq * s1sq + 12.0 * n * s1sq * p.s2 - 3.0 * n * (n - 1.0) * p.s2 * p.s2 -
                     4.0 * n * (n + 1.0) * p.s1 * p.s3 + n * n * (n + 1.0) * p.s4;
  return num / (n * (n - 1.0) * (n - 2.0) * (n - 3.0));
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) return kNaN;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) return kNaN;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("sample_covariance: length mismatch");
  if (x.size() < 2) return kNaN;
  const double mx = mean(x);
  const double my = mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  const double vx = sample_variance(x);
  const double vy = sample_variance(y);
  if (!(vx > 0.0) || !(vy > 0.0)) return kNaN;
  return sample_covariance(x, y) / std::sqrt(vx * vy);
}

double median(std::vector<double> x) {
  if (x.empty()) return kNaN;
  const std::size_t mid = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
  const double hi = x[mid];
  if (x.size() % 2 == 1) return hi;
  const double lo = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

KStatistics k_statistics(std::span<const double> x) {
  KStatistics k;
  k.n = x.size();
  const double n = static_cast<double>(x.size());
  k.k1 = mean(x);
  if (x.empty()) {
    k.k2 = k.k3 = k.k4 = kNaN;
    return k;
  }
  const PowerSums p = power_sums(x, k.k1);
  k.k2 = x.size() >= 2 ? k2_from(p, n) : kNaN;
  k.k3 = x.size() >= 3 ? k3_from(p, n) : kNaN;
  k.k4 = x.size() >= 4 ? k4_from(p, n) : kNaN;
  return k;
}

double jackknife_k4_se(std::span<const double> x) {
  if (x.size() < 5) return kNaN;
  const double n = static_cast<double>(x.size());
  const double c = mean(x);
  const PowerSums full = power_sums(x, c);
  std::vector<double> loo(x.size());
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - c;
    const double d2 = d * d;
    const PowerSums p{full.s1 - d, full.s2 - d2, full.s3 - d2 * d, full.s4 - d2 * d2};
    loo[i] = k4_from(p, n - 1.0);
    loo_mean += loo[i];
  }
  loo_mean /= n;
  double ss = 0.0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  return std::sqrt((n - 1.0) / n * ss);
}

Summary summarize(std::span<const double> x) {
  Summary s;
  s.n = x.size();
  const KStatistics k = k_statistics(x);
  s.mean = k.k1;
  s.variance_defined = x.size() >= 2;
  s.variance = k.k2;
  const double n = static_cast<double>(x.size());
  s.se_mean = s.variance_defined ? std::sqrt(k.k2 / n) : kNaN;
  // Var(k2) = k4 / n + 2 k2^2 / (n - 1).
  s.se_variance = x.size() >= 4 ? std::sqrt(std::max(0.0, k.k4 / n + 2.0 * k.k2 * k.k2 / (n - 1.0))) : kNaN;
  s.k4 = k.k4;
  s.se_k4 = jackknife_k4_se(x);
  return s;
}

double kolmogorov_distance_normal(std::vector<double> x) {
  if (x.empty()) return kNaN;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double cdf = gauss_cdf(x[i]);
    d = std::max({d, std::abs(static_cast<double>(j) / n - cdf), std::abs(static_cast<double>(i) / n - cdf)});
    i = j;
  }
  return d;
}

}  // namespace sphex
