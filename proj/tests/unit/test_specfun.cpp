// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <initializer_list>

#include <cmath>
#include <limits>
#include <numbers>

#include "sphex/specfun.hpp"

using namespace sphex;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Composite Simpson on [a, b]; used as a quadrature oracle for closed forms.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("legendre_p matches low-order closed forms") {
  for (double t : {-1.0, -0.7, -0.1, 0.0, 0.3, 0.99, 1.0}) {
    CHECK(legendre_p(0, t) == 1.0);
    CHECK(legendre_p(1, t) == doctest::Approx(t));
    CHECK(legendre_p(2, t) == doctest::Approx(0.5 * (3 * t * t - 1)).epsilon(1e-14));
    CHECK(legendre_p(3, t) == doctest::Approx(0.5 * (5 * t * t * t - 3 * t)).epsilon(1e-14));
  }
  CHECK(legendre_p(50, 1.0) == doctest::Approx(1.0));
  CHECK(legendre_p(51, -1.0) == doctest::Approx(-1.0));
}

TEST_CASE("legendre_p rejects arguments outside [-1, 1]") {
  CHECK_THROWS(legendre_p(3, 1.1));
  CHECK_THROWS(legendre_p(3, -1.0 - 1e-9));
  CHECK_NOTHROW(legendre_p(3, 1.0 + 1e-14));
}

TEST_CASE("assoc_legendre carries the Condon-Shortley phase") {
  const double t = 0.4;
  const double s = std::sqrt(1 - t * t);
  CHECK(assoc_legendre(1, 1, t) == doctest::Approx(-s));
  CHECK(assoc_legendre(2, 1, t) == doctest::Approx(-3 * t * s));
  CHECK(assoc_legendre(2, 2, t) == doctest::Approx(3 * s * s));
  CHECK(assoc_legendre(3, 0, t) == doctest::Approx(legendre_p(3, t)));
}

TEST_CASE("probabilists' Hermite polynomials") {
  for (double x : {-2.5, -1.0, 0.0, 0.7, 3.0}) {
    CHECK(hermite_h(0, x) == 1.0);
    CHECK(hermite_h(1, x) == doctest::Approx(x));
    CHECK(hermite_h(2, x) == doctest::Approx(x * x - 1));
    CHECK(hermite_h(3, x) == doctest::Approx(x * x * x - 3 * x));
    CHECK(hermite_h(4, x) == doctest::Approx(std::pow(x, 4) - 6 * x * x + 3));
    CHECK(hermite_h(6, x) == doctest::Approx(std::pow(x, 6) - 15 * std::pow(x, 4) + 45 * x * x - 15));
    CHECK(hermite_h_normalized(5, x) == doctest::Approx(hermite_h(5, x) / std::sqrt(factorial(5))));
  }
}

TEST_CASE("Hermite orthogonality under the Gaussian weight") {
  for (int p = 0; p <= 6; ++p) {
    for (int q = 0; q <= 6; ++q) {
      const double v = simpson([&](double x) { return hermite_h(p, x) * hermite_h(q, x) * gauss_pdf(x); }, -12, 12);
      CHECK(v == doctest::Approx(p == q ? factorial(p) : 0.0).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("Gaussian density and distribution") {
  CHECK(gauss_pdf(0.0) == doctest::Approx(kInvSqrt2Pi));
  CHECK(gauss_cdf(0.0) == 0.5);
  CHECK(gauss_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-15));
  CHECK(gauss_cdf(-2.0) == doctest::Approx(0.022750131948179195).epsilon(1e-14));
  CHECK(gauss_cdf(-std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(gauss_cdf(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK(gauss_cdf(-38.0) >= 0.0);
}

TEST_CASE("J_q is the Hermite projection of the indicator") {
  for (double z : {-1.5, -0.3, 0.0, 1.0, 2.2}) {
    CHECK(hermite_coeff_J(0, z) == doctest::Approx(gauss_cdf(z)));
    CHECK(hermite_coeff_J(1, z) == doctest::Approx(-gauss_pdf(z)));
    CHECK(hermite_coeff_J(2, z) == doctest::Approx(-z * gauss_pdf(z)));
    for (int q = 1; q <= 6; ++q) {
      const double direct = simpson([&](double x) { return hermite_h(q, x) * gauss_pdf(x); }, -12.0, z);
      CHECK(hermite_coeff_J(q, z) == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("chaos weights sum to the Bernoulli variance") {
  for (double z : {-2.0, -0.5, 0.0, 1.0, 1.7}) {
    double s = 0.0;
    double at100 = 0.0;
    for (int q = 1; q <= 2000; ++q) {
      const double w = chaos_weight(q, z);
      CHECK(w >= 0.0);
      s += w;
      if (q == 100) at100 = s;
    }
    // Weights decay like q^{-3/2}, so the remainder after q terms is about q^{-1/2}.
    const double p = gauss_cdf(z);
    CHECK(s <= p * (1 - p));
    CHECK(p * (1 - p) - s < 0.5 * (p * (1 - p) - at100));
    CHECK(p * (1 - p) - s < 0.01);
    CHECK(chaos_weight(2, z) == doctest::Approx(std::pow(hermite_coeff_J(2, z), 2) / 2.0));
  }
}

TEST_CASE("half |H_2| mass and the majorant") {
  const double inf = std::numeric_limits<double>::infinity();
  for (double z : {-3.0, -1.0, -0.4, 0.0, 0.9, 1.0, 2.5}) {
    // Split at the kinks of |x^2 - 1| so Simpson keeps its order.
    auto g = [](double x) { return 0.5 * std::abs(x * x - 1) * gauss_pdf(x); };
    double direct = 0.0;
    double lo = -40.0;
    for (double cut : {-1.0, 1.0, z}) {
      const double hi = std::min(cut, z);
      if (hi > lo) {
        direct += simpson(g, lo, hi);
        lo = hi;
      }
    }
    CHECK(half_abs_h2_mass(z) == doctest::Approx(direct).epsilon(1e-9));
    CHECK(lambda_majorant(z) == doctest::Approx(gauss_cdf(z) + direct).epsilon(1e-9));
  }
  CHECK(half_abs_h2_mass(-inf) == 0.0);
  CHECK(half_abs_h2_mass(inf) == doctest::Approx(kHalfAbsH2Total).epsilon(1e-15));
  CHECK(std::abs(kHalfAbsH2Total - 0.48394) <= 1e-5);
  CHECK(std::abs(lambda_majorant(inf) - 1.483943) <= 1e-5);
  CHECK(lambda_majorant(0.0) == doctest::Approx(0.5 + gauss_pdf(1.0)).epsilon(1e-14));
}

TEST_CASE("the majorant dominates increments of Phi and J_2 / 2") {
  const double inf = std::numeric_limits<double>::infinity();
  const double levels[] = {-inf, -3.0, -1.2, -1.0, -0.3, 0.0, 0.5, 1.0, 1.4, 2.0, 4.0, inf};
  auto j2 = [](double z) { return std::isinf(z) ? 0.0 : hermite_coeff_J(2, z); };
  for (double a : levels) {
    for (double b : levels) {
      if (!(a < b)) continue;
      const double dl = lambda_majorant(b) - lambda_majorant(a);
      CHECK(dl >= gauss_cdf(b) - gauss_cdf(a) - 1e-15);
      CHECK(dl >= 0.5 * std::abs(j2(b) - j2(a)) - 1e-15);
    }
  }
}
