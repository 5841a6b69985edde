// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <initializer_list>

#include <cmath>
#include <vector>

#include "sphex/excursion.hpp"
#include "sphex/field.hpp"
#include "sphex/simd/kernels.hpp"

using namespace sphex;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  NormalSource src(seed);
  std::vector<double> v(n);
  for (double& x : v) x = scale * src();
  return v;
}

// Restores the library's kernel table on scope exit.
struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::set_active_isa(saved); }
};

}  // namespace

TEST_CASE("scalar kernels are always present") {
  CHECK(simd::isa_available(simd::Isa::scalar));
  CHECK(simd::kernels_for(simd::Isa::scalar).isa == simd::Isa::scalar);
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (!v) {
    MESSAGE("AVX2 variant unavailable on this machine; skipping");
    return;
  }
  const simd::KernelTable& s = simd::scalar_kernels();
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{7},
                        std::size_t{64}, std::size_t{1001}}) {
    CAPTURE(n);
    const auto c = noise(n, 1), sn = noise(n, 2), w = noise(n, 3, 0.1), x = noise(n, 4);
    const std::vector<double> r0 = noise(n, 5);
    std::vector<double> r1 = r0, r2 = r0;
    s.accumulate_mode(r1.data(), c.data(), sn.data(), 0.7, -1.3, n);
    v->accumulate_mode(r2.data(), c.data(), sn.data(), 0.7, -1.3, n);
    // FMA contraction may round differently; bound by the size of the summands.
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(r2[k] - r1[k]) <= 4e-16 * (std::abs(r0[k]) + 0.7 * std::abs(c[k]) + 1.3 * std::abs(sn[k])));

    const double ws = s.weighted_sum(w.data(), x.data(), n);
    CHECK(v->weighted_sum(w.data(), x.data(), n) == doctest::Approx(ws).epsilon(1e-12).scale(1.0));

    for (int q_max : {0, 1, 4, 17, simd::kMaxHermiteOrder}) {
      std::vector<double> h1(q_max + 1), h2(q_max + 1);
      s.weighted_hermite_sums(w.data(), x.data(), n, q_max, h1.data());
      v->weighted_hermite_sums(w.data(), x.data(), n, q_max, h2.data());
      for (int q = 0; q <= q_max; ++q) {
        const double scale = 1e-12 * (1.0 + std::abs(h1[q])) * std::sqrt(std::tgamma(q + 1.0));
        CHECK(std::abs(h2[q] - h1[q]) <= scale);
      }
    }
    for (double z : {-1.0, 0.0, 0.3, 5.0}) {
      CHECK(v->weighted_below(w.data(), x.data(), n, z) ==
            doctest::Approx(s.weighted_below(w.data(), x.data(), n, z)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("field synthesis agrees across kernel variants") {
  if (!simd::isa_available(simd::Isa::avx2)) return;
  IsaGuard guard;
  const auto grid = std::make_shared<const SphereQuadrature>(build_quadrature(40));
  const HarmonicCoefficients a = sample_coefficients(20, 8);
  simd::set_active_isa(simd::Isa::scalar);
  const FieldSample fs = synthesize(a, grid);
  const auto hs = hermite_transforms(fs, 6);
  simd::set_active_isa(simd::Isa::avx2);
  const FieldSample fv = synthesize(a, grid);
  const auto hv = hermite_transforms(fv, 6);
  for (std::size_t i = 0; i < fs.values.size(); ++i)
    CHECK(fv.values[i] == doctest::Approx(fs.values[i]).epsilon(1e-12).scale(1.0));
  for (int q = 0; q <= 6; ++q) CHECK(hv[q] == doctest::Approx(hs[q]).epsilon(1e-10).scale(1.0));
}
