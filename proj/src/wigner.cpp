// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphex/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sphex/error.hpp"
#include "sphex/specfun.hpp"
#include "sphex/sphere.hpp"

namespace sphex {

namespace {

namespace mp = boost::multiprecision;
using Float256 = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;
using Float512 = mp::number<mp::cpp_bin_float<512, mp::digit_base_2>, mp::et_off>;
using Float1024 = mp::number<mp::cpp_bin_float<1024, mp::digit_base_2>, mp::et_off>;
using Float2048 = mp::number<mp::cpp_bin_float<2048, mp::digit_base_2>, mp::et_off>;

constexpr int kLogFactorialTableSize = 20001;

long double log_factorial(int n) {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(kLogFactorialTableSize);
    for (int i = 0; i < kLogFactorialTableSize; ++i) t[i] = std::lgamma(static_cast<long double>(i) + 1.0L);
    return t;
  }();
  if (n < kLogFactorialTableSize) return table[n];
  return std::lgamma(static_cast<long double>(n) + 1.0L);
}

bool triangle_ok(int l1, int l2, int l3) {
  return l1 >= 0 && l2 >= 0 && l3 >= 0 && l3 <= l1 + l2 && l1 <= l2 + l3 && l2 <= l1 + l3;
}

// sum_{k} r_k, r_0 = 1, r_{k+1} = -r_k * num(k) / den(k), over the Racah range.
template <class Real>
Real racah_ratio_sum(int l1, int l2, int l3, int m1, int m2, int kmin, int kmax) {
  Real term = 1;
  Real sum = 1;
  for (int k = kmin; k < kmax; ++k) {
    const long long num = static_cast<long long>(l1 + l2 - l3 - k) * (l1 - k - m1) * (l2 - k + m2);
    const long long den = static_cast<long long>(k + 1) * (l3 - l2 + k + 1 + m1) * (l3 - l1 + k + 1 - m2);
    term *= Real(-num);
    term /= Real(den);
    sum += term;
  }
  return sum;
}

template <class Real>
double scaled(const Real& sum, long double log_scale, int sign) {
  // sum * exp(log_scale), with the exponent split off to keep the product in range.
  const Real a = mp::abs(sum);
  if (a == 0) return 0.0;
  int e = 0;
  const Real mant = mp::frexp(a, &e);
  const long double log_value = std::log(static_cast<long double>(mant)) +
                                static_cast<long double>(e) * std::numbers::ln2_v<long double> + log_scale;
  const double magnitude = static_cast<double>(std::exp(log_value));
  return (sum < 0 ? -sign : sign) * magnitude;
}

double long_double_scaled(long double sum, long double log_scale, int sign) {
  if (sum == 0.0L) return 0.0;
  const long double log_value = std::log(std::abs(sum)) + log_scale;
  const double magnitude = static_cast<double>(std::exp(log_value));
  return (sum < 0 ? -sign : sign) * magnitude;
}

}  // namespace

double wigner3j(int l1, int l2, int l3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (!triangle_ok(l1, l2, l3)) return 0.0;
  if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m3) > l3) return 0.0;
  const int total = l1 + l2 + l3;
  if (m1 == 0 && m2 == 0 && total % 2 != 0) return 0.0;

  const int kmin = std::max({0, l2 - l3 - m1, l1 - l3 + m2});
  const int kmax = std::min({l1 + l2 - l3, l1 - m1, l2 + m2});
  if (kmin > kmax) return 0.0;

  const long double log_delta = log_factorial(l1 + l2 - l3) + log_factorial(l1 - l2 + l3) +
                                log_factorial(-l1 + l2 + l3) - log_factorial(total + 1);
  const long double log_m = log_factorial(l1 + m1) + log_factorial(l1 - m1) + log_factorial(l2 + m2) +
                            log_factorial(l2 - m2) + log_factorial(l3 + m3) + log_factorial(l3 - m3);
  const long double log_first =
      -(log_factorial(kmin) + log_factorial(l3 - l2 + kmin + m1) + log_factorial(l3 - l1 + kmin - m2) +
        log_factorial(l1 + l2 - l3 - kmin) + log_factorial(l1 - kmin - m1) + log_factorial(l2 - kmin + m2));
  const long double log_scale = 0.5L * (log_delta + log_m) + log_first;

  const int phase = l1 - l2 - m3 + kmin;
  const int sign = (phase % 2 == 0) ? 1 : -1;

  if (total <= 60) {
    return long_double_scaled(racah_ratio_sum<long double>(l1, l2, l3, m1, m2, kmin, kmax), log_scale, sign);
  }
  if (total <= 580) return scaled(racah_ratio_sum<Float256>(l1, l2, l3, m1, m2, kmin, kmax), log_scale, sign);
  if (total <= 1400) return scaled(racah_ratio_sum<Float512>(l1, l2, l3, m1, m2, kmin, kmax), log_scale, sign);
  if (total <= 3100) return scaled(racah_ratio_sum<Float1024>(l1, l2, l3, m1, m2, kmin, kmax), log_scale, sign);
  if (total <= 6500) return scaled(racah_ratio_sum<Float2048>(l1, l2, l3, m1, m2, kmin, kmax), log_scale, sign);
  throw ResourceError("wigner3j: total degree " + std::to_string(total) + " exceeds 6500");
}

double wigner3j_zero(int l1, int l2, int l3) {
  if (!triangle_ok(l1, l2, l3)) return 0.0;
  const int total = l1 + l2 + l3;
  if (total % 2 != 0) return 0.0;
  const int g = total / 2;
  const long double log_value =
      log_factorial(g) - log_factorial(g - l1) - log_factorial(g - l2) - log_factorial(g - l3) +
      0.5L * (log_factorial(total - 2 * l1) + log_factorial(total - 2 * l2) + log_factorial(total - 2 * l3) -
              log_factorial(total + 1));
  const double magnitude = static_cast<double>(std::exp(log_value));
  return (g % 2 == 0) ? magnitude : -magnitude;
}

double clebsch_gordan(int l1, int m1, int l2, int m2, int l3, int m3) {
  const double w = wigner3j(l1, l2, l3, m1, m2, -m3);
  if (w == 0.0) return 0.0;
  const int phase = l1 - l2 + m3;
  return ((phase % 2 == 0) ? 1.0 : -1.0) * std::sqrt(2.0 * l3 + 1.0) * w;
}

double legendre_moment(int l, int q, int max_degree) {
  if (l < 0) throw DomainError("legendre_moment: negative degree");
  if (q < 1) throw DomainError("legendre_moment: require q >= 1");
  const long long degree = static_cast<long long>(q) * l;
  if (degree > max_degree) {
    throw ResourceError("legendre_moment: polynomial degree " + std::to_string(degree) + " exceeds maximum " +
                        std::to_string(max_degree));
  }
  const int n = static_cast<int>((degree + 3) / 2);
  const auto rule = cached_gauss_legendre_rule(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = legendre_p(l, rule->nodes[i]);
    double pq = 1.0;
    for (int k = 0; k < q; ++k) pq *= p;
    sum += rule->weights[i] * pq;
  }
  return sum;
}

double legendre_moment_exact(int l, int q) {
  if (l < 0) throw DomainError("legendre_moment_exact: negative degree");
  if (q == 3) {
    const double w = wigner3j_zero(l, l, l);
    return 2.0 * w * w;
  }
  if (q == 4) {
    double sum = 0.0;
    for (int L = 0; L <= 2 * l; L += 2) {
      const double w2 = wigner3j_zero(l, l, L) * wigner3j_zero(l, l, L);
      sum += (2.0 * L + 1.0) * w2 * w2;
    }
    return 2.0 * sum;
  }
  throw DomainError("legendre_moment_exact: q must be 3 or 4");
}

LegendreMomentTable::LegendreMomentTable(int l, int q_max, int max_degree) : l_(l) {
  if (l < 0) throw DomainError("LegendreMomentTable: negative degree");
  if (q_max < 0) throw DomainError("LegendreMomentTable: negative q_max");
  const long long degree = static_cast<long long>(q_max) * l;
  if (degree > max_degree) {
    throw ResourceError("LegendreMomentTable: polynomial degree " + std::to_string(degree) +
                        " exceeds maximum " + std::to_string(max_degree));
  }
  const int n = static_cast<int>((degree + 3) / 2);
  const auto rule = cached_gauss_legendre_rule(n);
  moments_.assign(static_cast<std::size_t>(q_max) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const double p = legendre_p(l, rule->nodes[i]);
    double pq = rule->weights[i];
    for (int q = 0; q <= q_max; ++q) {
      moments_[q] += pq;
      pq *= p;
    }
  }
}

double LegendreMomentTable::operator()(int q) const {
  if (q < 0 || q > q_max()) throw DomainError("LegendreMomentTable: order out of range");
  return moments_[q];
}

double cgbou_ratio(int l) {
  if (l < 1) throw DomainError("cgbou_ratio: require l >= 1");
  const double w = wigner3j_zero(l, l, l);
  return static_cast<double>(l) * l * w * w;
}

double cgbou_gamma(int l, int L) {
  if (l < 1 || L < 2 || L > 2 * l - 2 || L % 2 != 0) {
    throw DomainError("cgbou_gamma: require even L in [2, 2l - 2]");
  }
  const double w = wigner3j_zero(l, l, L);
  return w * w * (std::numbers::pi / 2.0) * L * std::sqrt(2.0 * l - L) * std::sqrt(2.0 * l + L);
}

double stirling_log_ratio(int n) {
  if (n < 1) throw DomainError("stirling_log_ratio: require n >= 1");
  const long double nn = n;
  return static_cast<double>(std::lgamma(nn + 1.0L) -
                             (nn * std::log(nn) - nn + 0.5L * std::log(2.0L * std::numbers::pi_v<long double> * nn)));
}

ThreeJTable::ThreeJTable(int l) : l_(l), width_(static_cast<std::size_t>(2 * l + 1)) {
  if (l < 0) throw DomainError("ThreeJTable: negative degree");
  values_.assign(width_ * width_, 0.0);
  for (int m1 = -l; m1 <= l; ++m1) {
    for (int m2 = -l; m2 <= l; ++m2) {
      const int m3 = -m1 - m2;
      if (std::abs(m3) > l) continue;
      values_[static_cast<std::size_t>(m1 + l) * width_ + static_cast<std::size_t>(m2 + l)] =
          wigner3j(l, l, l, m1, m2, m3);
    }
  }
}

}  // namespace sphex
