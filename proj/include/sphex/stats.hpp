// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sphex {

/// Unbiased cumulant estimators k1..k4 (Fisher k-statistics).
struct KStatistics {
  std::size_t n = 0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
};

/// Requires at least four samples for k4; lower orders are NaN when undefined.
KStatistics k_statistics(std::span<const double> x);

/// Delete-one jackknife standard error of k4, O(n) via leave-one-out power sums.
double jackknife_k4_se(std::span<const double> x);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Unbiased sample variance; NaN and variance_defined == false when n < 2.
  double variance = 0.0;
  double se_mean = 0.0;
  /// Standard error of the variance estimate, from k4 and k2.
  double se_variance = 0.0;
  double k4 = 0.0;
  double se_k4 = 0.0;
  bool variance_defined = false;
};

Summary summarize(std::span<const double> x);

double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);
double sample_covariance(std::span<const double> x, std::span<const double> y);
double pearson_correlation(std::span<const double> x, std::span<const double> y);
double median(std::vector<double> x);

/// sup_z |F_n(z) - Phi(z)| for the empirical CDF of the given values.
double kolmogorov_distance_normal(std::vector<double> x);

}  // namespace sphex
