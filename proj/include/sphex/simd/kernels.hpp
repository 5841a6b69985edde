// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops behind field synthesis and grid reductions.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant compiled in its own translation unit. The active table is
// chosen once at first use from CPUID; SPHEX_ISA=scalar in the environment
// forces the reference path. Variants agree to rounding (FMA and the lane
// order of reductions differ), not bit-for-bit; a given table is
// deterministic.

namespace sphex::simd {

enum class Isa { scalar, avx2 };

inline constexpr int kMaxHermiteOrder = 63;

struct KernelTable {
  Isa isa;
  const char* name;

  /// row[k] += re * cos_row[k] - im * sin_row[k], k < n.
  void (*accumulate_mode)(double* row, const double* cos_row, const double* sin_row, double re, double im,
                          std::size_t n);

  /// sum_k w[k] * x[k].
  double (*weighted_sum)(const double* w, const double* x, std::size_t n);

  /// out[q] = sum_k w[k] He_q(x[k]) for q = 0..q_max (q_max <= kMaxHermiteOrder).
  void (*weighted_hermite_sums)(const double* w, const double* x, std::size_t n, int q_max, double* out);

  /// sum_k w[k] 1{x[k] <= z}.
  double (*weighted_below)(const double* w, const double* x, std::size_t n, double z);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

bool isa_available(Isa isa);
const KernelTable& kernels_for(Isa isa);

/// The table used by the library.
const KernelTable& active_kernels();
Isa active_isa();
/// Overrides the active table (tests and benchmarks). Not thread-safe with
/// concurrent kernel users.
void set_active_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace sphex::simd
