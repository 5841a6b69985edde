// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sphex/field.hpp"
#include "sphex/wigner.hpp"

namespace sphex {

/// Weighted empirical distribution z -> sum_{v_i <= z} w_i of grid values.
/// Knots are the distinct sorted values; cumweights[k] is the mass at or
/// below knots[k]. Right-continuous and nondecreasing by construction.
class EmpiricalCurve {
 public:
  EmpiricalCurve(std::span<const double> values, std::span<const double> weights);

  std::span<const double> knots() const { return knots_; }
  std::span<const double> cumweights() const { return cum_; }
  double total() const { return total_; }

  double operator()(double z) const;
  /// Mass strictly below z.
  double left_limit(double z) const;

 private:
  std::vector<double> knots_;
  std::vector<double> cum_;
  double total_ = 0.0;
};

/// Phi_l(z) = meas{f <= z} on the field's grid.
EmpiricalCurve empirical_measure(const FieldSample& field);

/// D_l = meas{f > 0} - meas{f < 0}; equals 4 pi - 2 Phi_l(0) when no grid
/// value is exactly zero.
double defect(const FieldSample& field);

/// G_l(z) = sqrt(l) (Phi_l(z) - M Phi(z)), with M the grid mass (4 pi up to
/// rounding) so that G vanishes exactly at +-infinity.
double empirical_process(const EmpiricalCurve& curve, int l, double z);

struct HermiteTransform {
  int l = 0;
  int q = 0;
  double value = 0.0;
};

/// h_{l;q} = int He_q(f) over the sphere, by quadrature.
HermiteTransform hermite_transform(const FieldSample& field, int q);
/// h_{l;q} for q = 0..q_max in one pass; entry 0 is the grid mass.
std::vector<double> hermite_transforms(const FieldSample& field, int q_max);

/// h_{l;2} straight from coefficients: sum_m |a_lm|^2 - 4 pi.
double h2_from_coefficients(const HarmonicCoefficients& coeffs);

/// Empirical process and its second-chaos residual for one field.
///
///   S_l(z) = G_l(z) - (J_2(z) / 2!) sqrt(l) h_{l;2}
///          = sqrt(l) [Phi_l(z) - M Phi(z) + z phi(z) h_{l;2} / 2].
///
/// Suprema are exact: between knots Phi_l is constant and the smooth part
/// has at most two critical points, so the candidates are knot values,
/// knot left limits and those critical points.
class ExcursionProfile {
 public:
  explicit ExcursionProfile(const FieldSample& field);
  ExcursionProfile(EmpiricalCurve curve, int l, double h2);

  int degree() const { return l_; }
  double h2() const { return h2_; }
  const EmpiricalCurve& curve() const { return curve_; }

  double measure(double z) const { return curve_(z); }
  double process(double z) const;
  double residual(double z) const;

  double sup_abs_process() const;
  double sup_abs_residual() const;

  /// CSV rows z,phi,G,S at every knot (right-continuous values).
  void write_csv(std::ostream& out) const;

 private:
  double residual_with(double z, double mass_below) const;

  EmpiricalCurve curve_;
  int l_;
  double h2_;
};

/// S_l(z) for a single level.
double reduction_residual(const FieldSample& field, double z);

struct VarianceSeries {
  int l = 0;
  double z = 0.0;
  int start = 2;
  int q_max = 0;
  double value = 0.0;
  double tail_bound = 0.0;
};

inline constexpr int kDefaultSeriesOrder = 60;

/// 8 pi^2 sum_{q=start}^{q_max} (J_q(z)^2 / q!) int_{-1}^{1} P_l^q, the exact
/// variance of Phi_l(z) (start = 2) or of S_l(z) / sqrt(l) (start = 3), with
/// a bound on the omitted tail from the Bernoulli variance Phi (1 - Phi) and
/// |P_l| <= 1. The table must cover q_max and at least order 4.
VarianceSeries variance_series(const LegendreMomentTable& moments, double z, int q_max, int start = 2);
VarianceSeries variance_series(int l, double z, int q_max = kDefaultSeriesOrder, int start = 2);

struct BispectrumValue {
  double value = 0.0;
  /// The cubic form vanishes identically for odd degree.
  bool odd_degree = false;
};

/// Normalized bispectrum
///   I_lll = sum_{m1+m2+m3=0} b_m1 b_m2 b_m3 (l l l; m1 m2 m3),
/// b_m = a_lm sqrt((2l+1) / (4 pi)) the unit-variance coefficients, so that
/// E I = 0 and E I^2 = 6 for Gaussian fields.
BispectrumValue bispectrum(const HarmonicCoefficients& coeffs, const ThreeJTable& table);
BispectrumValue bispectrum(const HarmonicCoefficients& coeffs);

/// h_{l;3} implied by the bispectrum: 4 pi (l l l; 0 0 0) I_lll.
double h3_from_bispectrum(int l, double bispectrum_value);

}  // namespace sphex
