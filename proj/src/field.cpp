// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphex/field.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

#include "sphex/error.hpp"
#include "sphex/simd/kernels.hpp"
#include "sphex/specfun.hpp"

namespace sphex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate, std::uint64_t degree) {
  return splitmix64(splitmix64(splitmix64(master_seed) ^ replicate) ^ degree);
}

double NormalSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

double NormalSource::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

HarmonicCoefficients::HarmonicCoefficients(int l) : l_(l) {
  if (l < 0) throw DomainError("HarmonicCoefficients: negative degree");
  a_.assign(static_cast<std::size_t>(2 * l + 1), {0.0, 0.0});
}

void HarmonicCoefficients::set(int m, std::complex<double> value) {
  if (m < 0 || m > l_) throw DomainError("HarmonicCoefficients::set: require 0 <= m <= l");
  if (m == 0) {
    if (value.imag() != 0.0) throw DomainError("HarmonicCoefficients::set: a_l0 must be real");
    a_[static_cast<std::size_t>(l_)] = value;
    return;
  }
  a_[static_cast<std::size_t>(l_ + m)] = value;
  a_[static_cast<std::size_t>(l_ - m)] = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(value);
}

double HarmonicCoefficients::power() const {
  double s = 0.0;
  for (const auto& a : a_) s += std::norm(a);
  return s;
}

HarmonicCoefficients sample_coefficients(int l, NormalSource& source) {
  if (l < 1) throw DomainError("sample_coefficients: require l >= 1");
  HarmonicCoefficients c(l);
  const double zonal_scale = std::sqrt(4.0 * std::numbers::pi / (2.0 * l + 1.0));
  const double scale = std::sqrt(2.0 * std::numbers::pi / (2.0 * l + 1.0));
  c.set(0, {source() * zonal_scale, 0.0});
  for (int m = 1; m <= l; ++m) {
    const double re = source();
    const double im = source();
    c.set(m, {re * scale, im * scale});
  }
  return c;
}

HarmonicCoefficients sample_coefficients(int l, std::uint64_t seed) {
  NormalSource source(seed);
  return sample_coefficients(l, source);
}

Synthesizer::Synthesizer(int l, std::shared_ptr<const SphereQuadrature> grid) : l_(l), grid_(std::move(grid)) {
  if (!grid_) throw DomainError("Synthesizer: null grid");
  if (l < 0) throw DomainError("Synthesizer: negative degree");
  if (grid_->band_limit() < l) {
    throw DomainError("Synthesizer: grid band limit " + std::to_string(grid_->band_limit()) +
                      " is below degree " + std::to_string(l));
  }
  const std::size_t width = static_cast<std::size_t>(l) + 1;
  const std::size_t n_lat = grid_->n_lat();
  const std::size_t n_lon = grid_->n_lon();
  legendre_.resize(n_lat * width);
  for (std::size_t j = 0; j < n_lat; ++j) {
    normalized_legendre_row(l, grid_->colat_nodes()[j], std::span<double>(legendre_.data() + j * width, width));
  }
  cos_.resize(width * n_lon);
  sin_.resize(width * n_lon);
  for (std::size_t m = 0; m < width; ++m) {
    for (std::size_t k = 0; k < n_lon; ++k) {
      // Reduce m k modulo n_lon before scaling so equal phases get equal values.
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((m * k) % n_lon) / static_cast<double>(n_lon);
      cos_[m * n_lon + k] = std::cos(angle);
      sin_[m * n_lon + k] = std::sin(angle);
    }
  }
}

void Synthesizer::synthesize_into(const HarmonicCoefficients& coeffs, std::span<double> out) const {
  if (coeffs.degree() != l_) throw DomainError("Synthesizer: coefficient degree mismatch");
  if (out.size() != grid_->size()) throw DomainError("Synthesizer: output size mismatch");
  const auto& kern = simd::active_kernels();
  const std::size_t width = static_cast<std::size_t>(l_) + 1;
  const std::size_t n_lat = grid_->n_lat();
  const std::size_t n_lon = grid_->n_lon();
  const double a0 = coeffs(0).real();
  for (std::size_t j = 0; j < n_lat; ++j) {
    double* row = out.data() + j * n_lon;
    const double* p = legendre_.data() + j * width;
    std::fill(row, row + n_lon, a0 * p[0]);
    for (std::size_t m = 1; m < width; ++m) {
      const std::complex<double> c = 2.0 * p[m] * coeffs(static_cast<int>(m));
      kern.accumulate_mode(row, cos_.data() + m * n_lon, sin_.data() + m * n_lon, c.real(), c.imag(), n_lon);
    }
  }
}

FieldSample Synthesizer::synthesize(const HarmonicCoefficients& coeffs, std::uint64_t seed) const {
  FieldSample f;
  f.l = l_;
  f.grid = grid_;
  f.seed = seed;
  f.values.resize(grid_->size());
  synthesize_into(coeffs, f.values);
  return f;
}

FieldSample synthesize(const HarmonicCoefficients& coeffs, std::shared_ptr<const SphereQuadrature> grid) {
  return Synthesizer(coeffs.degree(), std::move(grid)).synthesize(coeffs);
}

double covariance_oracle(int l, const GridPoint& x, const GridPoint& y) {
  const double c = std::clamp(dot(unit_vector(x.theta, x.phi), unit_vector(y.theta, y.phi)), -1.0, 1.0);
  return legendre_p(l, c);
}

void write_field_csv(std::ostream& out, const FieldSample& field) {
  out << "theta,phi,weight,value\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const GridPoint p = field.grid->point(i);
    out << p.theta << ',' << p.phi << ',' << p.weight << ',' << field.values[i] << '\n';
  }
}

}  // namespace sphex
