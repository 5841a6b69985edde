// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <initializer_list>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sphex/excursion.hpp"
#include "sphex/specfun.hpp"

using namespace sphex;
using std::numbers::pi;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

FieldSample field_for(int l, std::uint64_t seed, int band = -1) {
  const auto grid = std::make_shared<const SphereQuadrature>(build_quadrature(band < 0 ? 2 * l : band));
  return synthesize(sample_coefficients(l, seed), grid);
}

}  // namespace

TEST_CASE("empirical curve basics") {
  const double v[] = {0.5, -1.0, 0.5, 2.0};
  const double w[] = {1.0, 2.0, 3.0, 4.0};
  const EmpiricalCurve c(v, w);
  REQUIRE(c.knots().size() == 3);
  CHECK(c.total() == 10.0);
  CHECK(c(-kInf) == 0.0);
  CHECK(c(kInf) == 10.0);
  CHECK(c(-1.0) == 2.0);
  CHECK(c.left_limit(-1.0) == 0.0);
  CHECK(c(0.49) == 2.0);
  CHECK(c(0.5) == 6.0);
  CHECK(c.left_limit(0.5) == 2.0);
  CHECK(c(10.0) == 10.0);
}

TEST_CASE("empirical measure of a field is monotone and right-continuous") {
  const FieldSample f = field_for(12, 5);
  const EmpiricalCurve c = empirical_measure(f);
  CHECK(c.total() == doctest::Approx(4 * pi).epsilon(1e-13));
  CHECK(c(-kInf) == 0.0);
  CHECK(c(kInf) == c.total());
  const auto knots = c.knots();
  const auto cum = c.cumweights();
  for (std::size_t k = 1; k < knots.size(); ++k) {
    CHECK(knots[k] > knots[k - 1]);
    CHECK(cum[k] > cum[k - 1]);
    CHECK(c(knots[k]) == cum[k]);
    CHECK(c.left_limit(knots[k]) == cum[k - 1]);
    const double mid = 0.5 * (knots[k] + knots[k - 1]);
    if (mid > knots[k - 1] && mid < knots[k]) CHECK(c(mid) == cum[k - 1]);
  }
}

TEST_CASE("defect flips sign under negation and is bounded") {
  FieldSample f = field_for(10, 8);
  const double d = defect(f);
  CHECK(std::abs(d) <= 4 * pi);
  for (double& v : f.values) v = -v;
  CHECK(defect(f) == -d);
  const EmpiricalCurve c = empirical_measure(f);
  CHECK(d == doctest::Approx(-(4 * pi - 2 * c(0.0))).epsilon(1e-12));
}

TEST_CASE("empirical process vanishes at the ends") {
  const FieldSample f = field_for(9, 4);
  const EmpiricalCurve c = empirical_measure(f);
  CHECK(empirical_process(c, 9, kInf) == 0.0);
  CHECK(empirical_process(c, 9, -kInf) == 0.0);
  CHECK(empirical_process(c, 9, 1e6) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Hermite transforms: first order and odd parity vanish") {
  for (int l : {5, 8, 13}) {
    const FieldSample f = field_for(l, 100 + l);
    const std::vector<double> h = hermite_transforms(f, 7);
    CHECK(h[0] == doctest::Approx(4 * pi));
    CHECK(std::abs(h[1]) <= 1e-9);
    if (l % 2) {
      CHECK(std::abs(h[3]) <= 1e-9);
      CHECK(std::abs(h[5]) <= 1e-9);
      CHECK(std::abs(h[7]) <= 1e-9);
    }
    CHECK(hermite_transform(f, 2).value == h[2]);
    CHECK(hermite_transform(f, 2).q == 2);
    CHECK(hermite_transform(f, 2).l == l);
  }
  CHECK_THROWS(hermite_transform(field_for(3, 1), 0));
}

TEST_CASE("grid h2 equals the coefficient form") {
  for (int l : {3, 10, 24}) {
    const auto grid = std::make_shared<const SphereQuadrature>(build_quadrature(2 * l));
    const HarmonicCoefficients a = sample_coefficients(l, 9 + l);
    const FieldSample f = synthesize(a, grid);
    CHECK(hermite_transforms(f, 2)[2] == doctest::Approx(h2_from_coefficients(a)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("residual at zero equals the process") {
  const FieldSample f = field_for(16, 3);
  const ExcursionProfile p(f);
  CHECK(p.residual(0.0) == p.process(0.0));
  CHECK(reduction_residual(f, 0.0) == p.process(0.0));
  CHECK(p.residual(kInf) == 0.0);
  CHECK(p.residual(-kInf) == 0.0);
  const double z = 1.3;
  CHECK(p.residual(z) == doctest::Approx(p.process(z) - 0.5 * hermite_coeff_J(2, z) * 4.0 * p.h2()).epsilon(1e-12));
}

TEST_CASE("exact suprema dominate a fine scan and are attained") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const FieldSample f = field_for(6, seed);
    const ExcursionProfile p(f);
    const double supg = p.sup_abs_process();
    const double sups = p.sup_abs_residual();
    double scan_g = 0.0, scan_s = 0.0;
    for (int i = -40000; i <= 40000; ++i) {
      const double z = i * 1e-4;
      scan_g = std::max(scan_g, std::abs(p.process(z)));
      scan_s = std::max(scan_s, std::abs(p.residual(z)));
    }
    CHECK(supg >= scan_g - 1e-12);
    CHECK(sups >= scan_s - 1e-12);
    // The scan cannot land exactly on a left limit; allow the jump size.
    const auto w = f.grid->weights();
    const double jump = 2.0 * *std::max_element(w.begin(), w.end()) * std::sqrt(6.0) + 1e-2;
    CHECK(supg <= scan_g + jump);
    CHECK(sups <= scan_s + jump);
  }
}

TEST_CASE("profile CSV") {
  const FieldSample f = field_for(4, 2);
  const ExcursionProfile p(f);
  std::ostringstream os;
  p.write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "z,phi,G,S");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == p.curve().knots().size());
}

TEST_CASE("variance series properties") {
  const LegendreMomentTable t(20, 60);
  for (double z : {-2.0, -1.0, 0.0, 0.5, 1.0}) {
    double prev = 0.0;
    for (int q = 2; q <= 60; ++q) {
      const VarianceSeries s = variance_series(t, z, q);
      CHECK(s.value >= 0.0);
      CHECK(s.tail_bound >= 0.0);
      CHECK(s.value >= prev - 1e-18);
      prev = s.value;
    }
    const VarianceSeries s2 = variance_series(t, z, 60, 2);
    const VarianceSeries s3 = variance_series(t, z, 60, 3);
    const double q2 = 8 * pi * pi * chaos_weight(2, z) * t(2);
    CHECK(s2.value == doctest::Approx(s3.value + q2).epsilon(1e-12));
  }
  // No second chaos at z = 0, so its variance decays faster in l than at z = 1.
  const double r20 = variance_series(20, 0.0, 60).value / variance_series(20, 1.0, 60).value;
  const double r80 = variance_series(80, 0.0, 60).value / variance_series(80, 1.0, 60).value;
  CHECK(r20 < 0.1);
  CHECK(r80 < 0.5 * r20);
  CHECK_THROWS(variance_series(t, 1.0, 61));
  CHECK_THROWS(variance_series(t, 1.0, 2, 3));
  const LegendreMomentTable short_table(20, 3);
  CHECK_THROWS(variance_series(short_table, 1.0, 3));
}

TEST_CASE("variance series is bracketed by the tail bound") {
  // Crude truncation plus its bound must cover a long truncation.
  for (double z : {-1.0, 0.3, 1.5}) {
    const VarianceSeries coarse = variance_series(16, z, 6);
    const VarianceSeries fine = variance_series(16, z, 60);
    CHECK(fine.value <= coarse.value + coarse.tail_bound + 1e-15);
    CHECK(fine.value >= coarse.value);
  }
}

TEST_CASE("bispectrum consistency with the quadrature h3") {
  for (int l : {4, 8, 12}) {
    const auto grid = std::make_shared<const SphereQuadrature>(build_quadrature(2 * l));
    const HarmonicCoefficients a = sample_coefficients(l, 31 + l);
    const FieldSample f = synthesize(a, grid);
    const BispectrumValue b = bispectrum(a);
    CHECK_FALSE(b.odd_degree);
    const double h3 = hermite_transforms(f, 3)[3];
    CHECK(h3_from_bispectrum(l, b.value) == doctest::Approx(h3).epsilon(1e-9));
  }
  const BispectrumValue odd = bispectrum(sample_coefficients(5, 1));
  CHECK(odd.odd_degree);
  CHECK(odd.value == 0.0);
  CHECK_THROWS(bispectrum(sample_coefficients(4, 1), ThreeJTable(6)));
}
