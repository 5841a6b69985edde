// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "kernels_internal.hpp"

namespace sphex::simd::detail {

namespace {

void accumulate_mode(double* row, const double* cos_row, const double* sin_row, double re, double im,
                     std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) row[k] += re * cos_row[k] - im * sin_row[k];
}

double weighted_sum(const double* w, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += w[k] * x[k];
  return s;
}

void weighted_hermite_sums(const double* w, const double* x, std::size_t n, int q_max, double* out) {
  std::fill(out, out + q_max + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double xk = x[k];
    const double wk = w[k];
    double prev = 1.0;
    out[0] += wk;
    if (q_max == 0) continue;
    double cur = xk;
    out[1] += wk * cur;
    for (int q = 1; q < q_max; ++q) {
      const double next = xk * cur - q * prev;
      prev = cur;
      cur = next;
      out[q + 1] += wk * cur;
    }
  }
}

double weighted_below(const double* w, const double* x, std::size_t n, double z) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += x[k] <= z ? w[k] : 0.0;
  return s;
}

}  // namespace

const KernelTable kScalarTable{Isa::scalar, "scalar", accumulate_mode, weighted_sum, weighted_hermite_sums,
                               weighted_below};

}  // namespace sphex::simd::detail
