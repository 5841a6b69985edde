// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "sphex/sphere.hpp"

namespace sphex {

/// 64-bit stream key for one (master seed, replicate, degree) task.
/// SplitMix64 finalizers chained over the three inputs, so streams do not
/// depend on task scheduling.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate, std::uint64_t degree);

/// Standard normal deviates by the Marsaglia polar method on top of
/// std::mt19937_64. Uniforms are built from the top 53 bits of each draw,
/// so the stream is bit-stable across standard libraries.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}
  double operator()();
  /// Uniform on [0, 1).
  double uniform();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Coefficients a_lm, m = -l..l, of one degree-l eigenfunction.
///
/// Satisfies a_{l,-m} = (-1)^m conj(a_lm) exactly. Under sample_coefficients
/// E|a_lm|^2 = 4 pi / (2l + 1), so that for orthonormal Y_lm the field has
/// E f(x)^2 = 1 and E f(x) f(y) = P_l(<x, y>).
class HarmonicCoefficients {
 public:
  explicit HarmonicCoefficients(int l);
  int degree() const { return l_; }
  std::complex<double> operator()(int m) const { return a_[static_cast<std::size_t>(m + l_)]; }
  /// Sets a_lm for m >= 0 and the mirrored a_{l,-m}; a_l0 must be real.
  void set(int m, std::complex<double> value);
  std::span<const std::complex<double>> values() const { return a_; }

  /// sum_m |a_lm|^2 = int f^2 over the sphere.
  double power() const;

 private:
  int l_;
  std::vector<std::complex<double>> a_;
};

/// Draws coefficients from the isotropic Gaussian law; deterministic in (l, seed).
HarmonicCoefficients sample_coefficients(int l, std::uint64_t seed);
/// Same, drawing from an existing source.
HarmonicCoefficients sample_coefficients(int l, NormalSource& source);

/// Field values on a quadrature grid, aligned with SphereQuadrature points.
struct FieldSample {
  int l = 0;
  std::vector<double> values;
  std::shared_ptr<const SphereQuadrature> grid;
  std::uint64_t seed = 0;
};

/// Precomputed normalized Legendre rows and longitude phases for one degree
/// on one grid; immutable and shareable between threads.
///
/// f = a_l0 Y_l0 + 2 Re sum_{m>0} a_lm Y_lm is assembled ring by ring; the
/// per-ring longitude sum is the SIMD accumulate_mode kernel.
class Synthesizer {
 public:
  /// Throws DomainError if grid->band_limit() < l.
  Synthesizer(int l, std::shared_ptr<const SphereQuadrature> grid);

  int degree() const { return l_; }
  const std::shared_ptr<const SphereQuadrature>& grid() const { return grid_; }

  FieldSample synthesize(const HarmonicCoefficients& coeffs, std::uint64_t seed = 0) const;
  /// Writes values into out (size grid->size()).
  void synthesize_into(const HarmonicCoefficients& coeffs, std::span<double> out) const;

 private:
  int l_;
  std::shared_ptr<const SphereQuadrature> grid_;
  std::vector<double> legendre_;  // [ring][m], m = 0..l
  std::vector<double> cos_;       // [m][k]
  std::vector<double> sin_;       // [m][k]
};

FieldSample synthesize(const HarmonicCoefficients& coeffs, std::shared_ptr<const SphereQuadrature> grid);

/// E f(x) f(y) = P_l(cos d(x, y)).
double covariance_oracle(int l, const GridPoint& x, const GridPoint& y);

/// CSV rows theta,phi,weight,value with a header line.
void write_field_csv(std::ostream& out, const FieldSample& field);

}  // namespace sphex
