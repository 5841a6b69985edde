// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sphex/simd/kernels.hpp"

namespace sphex::simd::detail {

extern const KernelTable kScalarTable;
#if defined(SPHEX_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif

}  // namespace sphex::simd::detail
