// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>


#include "kernels_internal.hpp"

namespace sphex::simd::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void accumulate_mode(double* row, const double* cos_row, const double* sin_row, double re, double im,
                     std::size_t n) {
  const __m256d vre = _mm256_set1_pd(re);
  const __m256d vim = _mm256_set1_pd(im);
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    __m256d r0 = _mm256_loadu_pd(row + k);
    __m256d r1 = _mm256_loadu_pd(row + k + 4);
    r0 = _mm256_fmadd_pd(vre, _mm256_loadu_pd(cos_row + k), r0);
    r1 = _mm256_fmadd_pd(vre, _mm256_loadu_pd(cos_row + k + 4), r1);
    r0 = _mm256_fnmadd_pd(vim, _mm256_loadu_pd(sin_row + k), r0);
    r1 = _mm256_fnmadd_pd(vim, _mm256_loadu_pd(sin_row + k + 4), r1);
    _mm256_storeu_pd(row + k, r0);
    _mm256_storeu_pd(row + k + 4, r1);
  }
  for (; k + 4 <= n; k += 4) {
    __m256d r = _mm256_loadu_pd(row + k);
    r = _mm256_fmadd_pd(vre, _mm256_loadu_pd(cos_row + k), r);
    r = _mm256_fnmadd_pd(vim, _mm256_loadu_pd(sin_row + k), r);
    _mm256_storeu_pd(row + k, r);
  }
  for (; k < n; ++k) row[k] += re * cos_row[k] - im * sin_row[k];
}

double weighted_sum(const double* w, const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(x + k), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + k + 4), _mm256_loadu_pd(x + k + 4), a1);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; k < n; ++k) s += w[k] * x[k];
  return s;
}

void weighted_hermite_sums(const double* w, const double* x, std::size_t n, int q_max, double* out) {
  __m256d acc[kMaxHermiteOrder + 1];
  for (int q = 0; q <= q_max; ++q) acc[q] = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xv = _mm256_loadu_pd(x + k);
    const __m256d wv = _mm256_loadu_pd(w + k);
    acc[0] = _mm256_add_pd(acc[0], wv);
    if (q_max == 0) continue;
    __m256d prev = _mm256_set1_pd(1.0);
    __m256d cur = xv;
    acc[1] = _mm256_fmadd_pd(wv, cur, acc[1]);
    for (int q = 1; q < q_max; ++q) {
      // He_{q+1} = x He_q - q He_{q-1}
      const __m256d next = _mm256_fnmadd_pd(_mm256_set1_pd(static_cast<double>(q)), prev, _mm256_mul_pd(xv, cur));
      prev = cur;
      cur = next;
      acc[q + 1] = _mm256_fmadd_pd(wv, cur, acc[q + 1]);
    }
  }
  for (int q = 0; q <= q_max; ++q) out[q] = hsum(acc[q]);
  for (; k < n; ++k) {
    const double xk = x[k];
    const double wk = w[k];
    out[0] += wk;
    if (q_max == 0) continue;
    double prev = 1.0;
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
  const __m256d zv = _mm256_set1_pd(z);
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256d m0 = _mm256_cmp_pd(_mm256_loadu_pd(x + k), zv, _CMP_LE_OQ);
    const __m256d m1 = _mm256_cmp_pd(_mm256_loadu_pd(x + k + 4), zv, _CMP_LE_OQ);
    a0 = _mm256_add_pd(a0, _mm256_and_pd(m0, _mm256_loadu_pd(w + k)));
    a1 = _mm256_add_pd(a1, _mm256_and_pd(m1, _mm256_loadu_pd(w + k + 4)));
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; k < n; ++k) s += x[k] <= z ? w[k] : 0.0;
  return s;
}

}  // namespace

const KernelTable kAvx2Table{Isa::avx2, "avx2", accumulate_mode, weighted_sum, weighted_hermite_sums,
                             weighted_below};

}  // namespace sphex::simd::detail
