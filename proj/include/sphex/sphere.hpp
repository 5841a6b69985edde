// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sphex {

/// Gauss-Legendre nodes on [-1, 1], ascending, with matching weights.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule; exact for polynomials of degree <= 2n - 1.
/// Nodes are Newton-refined roots of P_n and are exactly antisymmetric.
GaussLegendreRule gauss_legendre_rule(int n);

/// Memoized rule, shared read-only between callers.
std::shared_ptr<const GaussLegendreRule> cached_gauss_legendre_rule(int n);

struct GridPoint {
  double theta = 0.0;  // colatitude in [0, pi]
  double phi = 0.0;    // longitude in [0, 2 pi)
  double weight = 0.0;
};

inline constexpr int kDefaultMaxBandLimit = 4096;

/// Product rule on the sphere: Gauss-Legendre in cos(theta) times an even
/// number of equispaced longitudes. Points are stored latitude-major with
/// colatitude increasing: index = ring * n_lon + k.
class SphereQuadrature {
 public:
  int band_limit() const { return band_limit_; }
  std::size_t n_lat() const { return cos_theta_.size(); }
  std::size_t n_lon() const { return n_lon_; }
  std::size_t size() const { return n_lat() * n_lon_; }
  double lon_step() const { return lon_step_; }

  std::span<const double> colat_nodes() const { return cos_theta_; }    // cos(theta), descending
  std::span<const double> colat_weights() const { return colat_weights_; }
  std::span<const double> theta() const { return theta_; }
  /// Per-point weights (colat weight * lon step), latitude-major.
  std::span<const double> weights() const { return point_weights_; }

  GridPoint point(std::size_t index) const;
  /// Index of the antipodal grid point (pi - theta, phi + pi).
  std::size_t antipode(std::size_t index) const;

  /// Integral of sampled values over the sphere.
  double integrate(std::span<const double> values) const;

 private:
  friend SphereQuadrature build_quadrature(int band_limit, int max_band_limit);

  int band_limit_ = 0;
  std::size_t n_lon_ = 0;
  double lon_step_ = 0.0;
  std::vector<double> cos_theta_;
  std::vector<double> theta_;
  std::vector<double> colat_weights_;
  std::vector<double> point_weights_;
};

/// Grid integrating Y_{l1 m1} conj(Y_{l2 m2}) exactly for l1, l2 <= band_limit:
/// band_limit + 1 Gauss-Legendre rings and the smallest even longitude count
/// >= 2 band_limit + 1. Throws ResourceError above max_band_limit.
SphereQuadrature build_quadrature(int band_limit, int max_band_limit = kDefaultMaxBandLimit);

/// Orthonormal associated Legendre values
///   out[m] = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_lm(t),  m = 0..l,
/// with the Condon-Shortley phase, by the normalized recurrence in degree.
/// Exponents are tracked separately so that tiny values near the poles
/// underflow gracefully instead of poisoning the recurrence.
void normalized_legendre_row(int l, double t, std::span<double> out);

/// Complex spherical harmonic Y_lm(theta, phi), orthonormal on the sphere.
/// Throws DomainError if |m| > l.
std::complex<double> eval_ylm(int l, int m, double theta, double phi);

/// Unit vector for colatitude/longitude.
struct Vec3 {
  double x, y, z;
};
Vec3 unit_vector(double theta, double phi);
double dot(const Vec3& a, const Vec3& b);

}  // namespace sphex
