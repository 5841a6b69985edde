// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace sphex {

/// Wigner 3j symbol (l1 l2 l3; m1 m2 m3) by the Racah sum.
///
/// Factorial prefactors are accumulated as log-factorials in long double.
/// The alternating sum is formed by term ratios (small integers only) in
/// extended precision: long double when the total degree is small, a
/// 256 to 2048-bit binary float otherwise, sized to the observed
/// cancellation (about J/5 bits, J = l1 + l2 + l3). Returns exactly 0 when a
/// selection rule fails.
double wigner3j(int l1, int l2, int l3, int m1, int m2, int m3);

/// Closed form of (l1 l2 l3; 0 0 0), evaluated in log space.
double wigner3j_zero(int l1, int l2, int l3);

/// C^{l3 m3}_{l1 m1 l2 m2} = (-1)^{l1 - l2 + m3} sqrt(2 l3 + 1) (l1 l2 l3; m1 m2 -m3).
double clebsch_gordan(int l1, int m1, int l2, int m2, int l3, int m3);

/// Default ceiling on q * l for legendre_moment.
inline constexpr int kDefaultMaxMomentDegree = 60000;

/// int_{-1}^{1} P_l(t)^q dt by Gauss-Legendre quadrature with
/// ceil((q l + 2) / 2) nodes. Throws ResourceError if q l > max_degree.
double legendre_moment(int l, int q, int max_degree = kDefaultMaxMomentDegree);

/// int_{-1}^{1} P_l^q for q in {3, 4} from 3j identities:
///   q = 3:  2 (l l l; 0 0 0)^2
///   q = 4:  2 sum_L (2L + 1) (l l L; 0 0 0)^4
double legendre_moment_exact(int l, int q);

/// All moments int_{-1}^{1} P_l^q, q = 0..q_max, from one quadrature rule
/// large enough for q_max. Immutable once built.
class LegendreMomentTable {
 public:
  LegendreMomentTable(int l, int q_max, int max_degree = kDefaultMaxMomentDegree);
  int degree() const { return l_; }
  int q_max() const { return static_cast<int>(moments_.size()) - 1; }
  double operator()(int q) const;

 private:
  int l_;
  std::vector<double> moments_;
};

/// l^2 (l l l; 0 0 0)^2; tends to 2 / (pi sqrt 3) for even l.
double cgbou_ratio(int l);

/// (l l L; 0 0 0)^2 (pi / 2) L sqrt(2l - L) sqrt(2l + L), for even L in [2, 2l - 2].
double cgbou_gamma(int l, int L);

/// log(n! / (n^n e^{-n} sqrt(2 pi n))).
double stirling_log_ratio(int n);

/// Dense table of (l l l; m1 m2 -m1-m2) for one degree, indexed by m1, m2 in [-l, l].
class ThreeJTable {
 public:
  explicit ThreeJTable(int l);
  int degree() const { return l_; }
  double operator()(int m1, int m2) const {
    return values_[static_cast<std::size_t>(m1 + l_) * width_ + static_cast<std::size_t>(m2 + l_)];
  }

 private:
  int l_;
  std::size_t width_;
  std::vector<double> values_;
};

}  // namespace sphex
