// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphex/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sphex/error.hpp"

namespace sphex {

namespace {

constexpr double kDomainSlack = 1e-12;

double checked_cosine(double t, const char* who) {
  if (!(std::abs(t) <= 1.0 + kDomainSlack)) {
    throw DomainError(std::string(who) + ": argument outside [-1, 1]: " + std::to_string(t));
  }
  return std::clamp(t, -1.0, 1.0);
}

}  // namespace

double legendre_p(int l, double t) {
  if (l < 0) throw DomainError("legendre_p: negative degree");
  t = checked_cosine(t, "legendre_p");
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int k = 2; k <= l; ++k) {
    const double next = ((2.0 * k - 1.0) * t * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

double assoc_legendre(int l, int m, double t) {
  if (l < 0 || m < 0 || m > l) throw DomainError("assoc_legendre: require 0 <= m <= l");
  t = checked_cosine(t, "assoc_legendre");
  const double s = std::sqrt((1.0 - t) * (1.0 + t));
  double pmm = 1.0;
  for (int k = 1; k <= m; ++k) pmm *= -(2.0 * k - 1.0) * s;
  if (l == m) return pmm;
  double prev = pmm;
  double cur = t * (2.0 * m + 1.0) * pmm;
  for (int k = m + 2; k <= l; ++k) {
    const double next = ((2.0 * k - 1.0) * t * cur - (k + m - 1.0) * prev) / (k - m);
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_h(int q, double x) {
  if (q < 0) throw DomainError("hermite_h: negative order");
  if (q == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < q; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_h_normalized(int q, double x) {
  if (q < 0) throw DomainError("hermite_h_normalized: negative order");
  if (q == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < q; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

double gauss_pdf(double z) {
  if (std::isinf(z)) return 0.0;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double gauss_cdf(double z) {
  if (z == std::numeric_limits<double>::infinity()) return 1.0;
  if (z == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::clamp(0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0), 0.0, 1.0);
}

double hermite_coeff_J(int q, double z) {
  if (q < 0) throw DomainError("hermite_coeff_J: negative order");
  if (q == 0) return gauss_cdf(z);
  if (std::isinf(z)) return 0.0;
  return -hermite_h(q - 1, z) * gauss_pdf(z);
}

double chaos_weight(int q, double z) {
  if (q < 0) throw DomainError("chaos_weight: negative order");
  if (q == 0) {
    const double p = gauss_cdf(z);
    return p * p;
  }
  if (std::isinf(z)) return 0.0;
  // J_q^2 / q! = phi^2 He_{q-1}^2 / (q (q-1)!)
  const double h = hermite_h_normalized(q - 1, z) * gauss_pdf(z);
  return h * h / q;
}

double half_abs_h2_mass(double z) {
  // int_{-inf}^{z} (x^2 - 1) phi = -z phi(z); the sign flips on (-1, 1].
  const double phi1 = gauss_pdf(1.0);
  if (z == -std::numeric_limits<double>::infinity()) return 0.0;
  if (z == std::numeric_limits<double>::infinity()) return 2.0 * phi1;
  const double zphi = z * gauss_pdf(z);
  if (z <= -1.0) return -0.5 * zphi;
  if (z <= 1.0) return 0.5 * (zphi + 2.0 * phi1);
  return 0.5 * (-zphi + 4.0 * phi1);
}

double lambda_majorant(double z) { return gauss_cdf(z) + half_abs_h2_mass(z); }

}  // namespace sphex
