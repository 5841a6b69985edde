// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphex/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <numbers>
#include <ostream>

#include "sphex/error.hpp"
#include "sphex/simd/kernels.hpp"
#include "sphex/specfun.hpp"

namespace sphex {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kEightPiSq = 8.0 * std::numbers::pi * std::numbers::pi;

}  // namespace

EmpiricalCurve::EmpiricalCurve(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw DomainError("EmpiricalCurve: values/weights size mismatch");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  knots_.reserve(values.size());
  cum_.reserve(values.size());
  double running = 0.0;
  for (std::size_t idx : order) {
    running += weights[idx];
    if (!knots_.empty() && knots_.back() == values[idx]) {
      cum_.back() = running;
    } else {
      knots_.push_back(values[idx]);
      cum_.push_back(running);
    }
  }
  total_ = running;
}

double EmpiricalCurve::operator()(double z) const {
  const auto k = std::upper_bound(knots_.begin(), knots_.end(), z) - knots_.begin();
  return k == 0 ? 0.0 : cum_[static_cast<std::size_t>(k - 1)];
}

double EmpiricalCurve::left_limit(double z) const {
  const auto k = std::lower_bound(knots_.begin(), knots_.end(), z) - knots_.begin();
  return k == 0 ? 0.0 : cum_[static_cast<std::size_t>(k - 1)];
}

EmpiricalCurve empirical_measure(const FieldSample& field) {
  return EmpiricalCurve(field.values, field.grid->weights());
}

double defect(const FieldSample& field) {
  const auto w = field.grid->weights();
  double above = 0.0;
  double below = 0.0;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (field.values[i] > 0.0) above += w[i];
    if (field.values[i] < 0.0) below += w[i];
  }
  return above - below;
}

double empirical_process(const EmpiricalCurve& curve, int l, double z) {
  return std::sqrt(static_cast<double>(l)) * (curve(z) - curve.total() * gauss_cdf(z));
}

std::vector<double> hermite_transforms(const FieldSample& field, int q_max) {
  if (q_max < 0 || q_max > simd::kMaxHermiteOrder) throw DomainError("hermite_transforms: order out of range");
  std::vector<double> out(static_cast<std::size_t>(q_max) + 1);
  const auto w = field.grid->weights();
  simd::active_kernels().weighted_hermite_sums(w.data(), field.values.data(), field.values.size(), q_max, out.data());
  return out;
}

HermiteTransform hermite_transform(const FieldSample& field, int q) {
  if (q < 1) throw DomainError("hermite_transform: require q >= 1");
  return {field.l, q, hermite_transforms(field, q)[static_cast<std::size_t>(q)]};
}

double h2_from_coefficients(const HarmonicCoefficients& coeffs) { return coeffs.power() - kFourPi; }

ExcursionProfile::ExcursionProfile(const FieldSample& field)
    : curve_(empirical_measure(field)), l_(field.l), h2_(hermite_transforms(field, 2)[2]) {}

ExcursionProfile::ExcursionProfile(EmpiricalCurve curve, int l, double h2) : curve_(std::move(curve)), l_(l), h2_(h2) {}

double ExcursionProfile::process(double z) const { return empirical_process(curve_, l_, z); }

double ExcursionProfile::residual_with(double z, double mass_below) const {
  const double smooth = std::isinf(z) ? 0.0 : 0.5 * z * gauss_pdf(z) * h2_;
  return std::sqrt(static_cast<double>(l_)) * (mass_below - curve_.total() * gauss_cdf(z) + smooth);
}

double ExcursionProfile::residual(double z) const { return residual_with(z, curve_(z)); }

double ExcursionProfile::sup_abs_process() const {
  const double mass = curve_.total();
  const double root_l = std::sqrt(static_cast<double>(l_));
  const auto knots = curve_.knots();
  const auto cum = curve_.cumweights();
  double best = 0.0;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const double centre = mass * gauss_cdf(knots[k]);
    const double left = k == 0 ? 0.0 : cum[k - 1];
    best = std::max({best, std::abs(cum[k] - centre), std::abs(left - centre)});
  }
  return root_l * best;
}

double ExcursionProfile::sup_abs_residual() const {
  const auto knots = curve_.knots();
  const auto cum = curve_.cumweights();
  double best = 0.0;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const double left = k == 0 ? 0.0 : cum[k - 1];
    best = std::max({best, std::abs(residual_with(knots[k], cum[k])), std::abs(residual_with(knots[k], left))});
  }
  // d/dz [-M Phi + z phi h2 / 2] = phi(z) [-M + h2 (1 - z^2) / 2]
  if (h2_ != 0.0) {
    const double disc = 1.0 - 2.0 * curve_.total() / h2_;
    if (disc >= 0.0) {
      const double zc = std::sqrt(disc);
      best = std::max({best, std::abs(residual(zc)), std::abs(residual(-zc))});
    }
  }
  return best;
}

void ExcursionProfile::write_csv(std::ostream& out) const {
  out << "z,phi,G,S\n" << std::setprecision(17);
  const auto knots = curve_.knots();
  const auto cum = curve_.cumweights();
  const double root_l = std::sqrt(static_cast<double>(l_));
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const double z = knots[k];
    out << z << ',' << cum[k] << ',' << root_l * (cum[k] - curve_.total() * gauss_cdf(z)) << ','
        << residual_with(z, cum[k]) << '\n';
  }
}

double reduction_residual(const FieldSample& field, double z) { return ExcursionProfile(field).residual(z); }

VarianceSeries variance_series(const LegendreMomentTable& moments, double z, int q_max, int start) {
  if (start < 1) throw DomainError("variance_series: start must be >= 1");
  if (q_max < start) throw DomainError("variance_series: q_max below start index");
  if (moments.q_max() < std::max(q_max, 4)) throw DomainError("variance_series: moment table too short");
  VarianceSeries s;
  s.l = moments.degree();
  s.z = z;
  s.start = start;
  s.q_max = q_max;
  double value = 0.0;
  double captured = 0.0;
  for (int q = 1; q <= q_max; ++q) {
    const double w = chaos_weight(q, z);
    captured += w;
    if (q >= start) value += w * moments(q);
  }
  const double p = gauss_cdf(z);
  const double remaining = std::max(0.0, p * (1.0 - p) - captured);
  s.value = kEightPiSq * value;
  s.tail_bound = kEightPiSq * remaining * std::max(moments(4), std::abs(moments(3)));
  return s;
}

VarianceSeries variance_series(int l, double z, int q_max, int start) {
  const LegendreMomentTable table(l, std::max(q_max, 4));
  return variance_series(table, z, q_max, start);
}

BispectrumValue bispectrum(const HarmonicCoefficients& coeffs, const ThreeJTable& table) {
  const int l = coeffs.degree();
  if (table.degree() != l) throw DomainError("bispectrum: 3j table degree mismatch");
  if (l % 2 != 0) return {0.0, true};
  const double scale = std::sqrt((2.0 * l + 1.0) / kFourPi);
  std::vector<std::complex<double>> b(static_cast<std::size_t>(2 * l + 1));
  for (int m = -l; m <= l; ++m) b[static_cast<std::size_t>(m + l)] = scale * coeffs(m);
  double sum = 0.0;
  for (int m1 = -l; m1 <= l; ++m1) {
    const int lo = std::max(-l, -l - m1);
    const int hi = std::min(l, l - m1);
    for (int m2 = lo; m2 <= hi; ++m2) {
      const int m3 = -m1 - m2;
      const std::complex<double> prod =
          b[static_cast<std::size_t>(m1 + l)] * b[static_cast<std::size_t>(m2 + l)] * b[static_cast<std::size_t>(m3 + l)];
      sum += prod.real() * table(m1, m2);
    }
  }
  return {sum, false};
}

BispectrumValue bispectrum(const HarmonicCoefficients& coeffs) {
  return bispectrum(coeffs, ThreeJTable(coeffs.degree()));
}

double h3_from_bispectrum(int l, double bispectrum_value) {
  return kFourPi * wigner3j_zero(l, l, l) * bispectrum_value;
}

}  // namespace sphex
