// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

namespace sphex {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

/// Legendre polynomial P_l(t) by the three-term recurrence.
/// Throws DomainError if |t| > 1 + 1e-12; t is clamped to [-1, 1] otherwise.
double legendre_p(int l, double t);

/// Associated Legendre function P_lm(t) with the Condon-Shortley phase and
/// the Rodrigues factor 1/(2^l l!), so that assoc_legendre(l, 0, t) == P_l(t).
/// Intended for moderate degrees; spherical harmonics use the normalized
/// recurrence in sphere.hpp instead.
double assoc_legendre(int l, int m, double t);

/// Probabilists' Hermite polynomial He_q(x).
double hermite_h(int q, double x);

/// He_q(x) / sqrt(q!), stable for large q.
double hermite_h_normalized(int q, double x);

double gauss_pdf(double z);
double gauss_cdf(double z);

/// Coefficient of He_q in the Hermite expansion of the indicator 1{u <= z}:
/// J_0 = Phi(z), J_q = -He_{q-1}(z) phi(z) for q >= 1.
double hermite_coeff_J(int q, double z);

/// J_q(z)^2 / q!, computed through normalized Hermite values so that large
/// orders do not overflow.
double chaos_weight(int q, double z);

/// Lambda(z) = Phi(z) + (1/2) int_{-inf}^{z} |x^2 - 1| phi(x) dx in closed form.
/// Accepts +-infinity.
double lambda_majorant(double z);

/// (1/2) int_{-inf}^{z} |x^2 - 1| phi(x) dx.
double half_abs_h2_mass(double z);

/// (1/2) int |x^2 - 1| phi = 2 phi(1).
inline constexpr double kHalfAbsH2Total = 2.0 * kInvSqrt2Pi * 0.606530659712633423603799534991;
/// Lambda(+inf) = 1 + kHalfAbsH2Total.
inline constexpr double kLambdaInfinity = 1.0 + kHalfAbsH2Total;

}  // namespace sphex
