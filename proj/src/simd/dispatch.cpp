// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace sphex::simd {

namespace {

bool cpu_has_avx2() {
#if defined(SPHEX_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("SPHEX_ISA"); env != nullptr && std::string_view(env) == "scalar") {
    return &detail::kScalarTable;
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* avx2_kernels() {
#if defined(SPHEX_HAVE_AVX2_KERNELS)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

bool isa_available(Isa isa) { return isa == Isa::scalar || avx2_kernels() != nullptr; }

const KernelTable& kernels_for(Isa isa) {
  if (isa == Isa::avx2) {
    if (const KernelTable* t = avx2_kernels()) return *t;
  }
  return detail::kScalarTable;
}

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

Isa active_isa() { return active_kernels().isa; }

void set_active_isa(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace sphex::simd
