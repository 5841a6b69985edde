// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sphex/excursion.hpp"
#include "sphex/field.hpp"
#include "sphex/stats.hpp"
#include "sphex/wigner.hpp"

namespace sphex {

/// Runs body(i) for i in [0, count) on up to `workers` threads (<= 0 means
/// hardware concurrency). Work is claimed from a shared counter; the first
/// exception thrown is rethrown on the calling thread after all workers stop.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

int resolve_workers(int requested);

/// Shared, cached quadrature grid for a band limit.
std::shared_ptr<const SphereQuadrature> shared_quadrature(int band_limit);

enum class EnsembleMode {
  /// Sample coefficients, synthesize on the grid, evaluate grid statistics.
  field,
  /// Coefficient-only statistics; no synthesis.
  coefficients,
};

struct EnsembleConfig {
  std::uint64_t master_seed = 1;
  std::vector<int> degrees;
  int replicates = 1;
  double band_limit_factor = 2.0;
  std::vector<double> z_levels{-2.0, -1.0, 0.0, 1.0, 2.0};
  int q_max = kDefaultSeriesOrder;
  int workers = 0;
  EnsembleMode mode = EnsembleMode::field;

  /// Throws ConfigError on an empty degree list, degrees < 1, replicates < 1,
  /// band factor < 1 or unsorted levels.
  void validate() const;
  /// Grid band for degree l: ceil(factor * l), never below l.
  int band_limit(int l) const;
};

/// What a statistic sees for one (degree, replicate) task.
struct TaskInput {
  int l = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  const HarmonicCoefficients* coeffs = nullptr;
  /// Null in coefficient mode.
  const FieldSample* field = nullptr;
  /// Set when EnsembleSpec::needs_threej is true.
  const ThreeJTable* threej = nullptr;
  const EnsembleConfig* config = nullptr;
};

struct EnsembleSpec {
  std::vector<std::string> columns;
  /// Fills out[c] for every column.
  std::function<void(const TaskInput&, std::span<double> out)> evaluate;
  bool needs_threej = false;
};

/// Default columns. Field mode: h2, h3, h4, defect, sup_G, sup_S and
/// Phi(z), G(z), S(z) per level. Coefficient mode: power, h2, bispectrum, h3.
EnsembleSpec standard_statistics(const EnsembleConfig& config);

struct EnsembleRow {
  int l = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;
  /// Non-empty when the task hit a resource error; values are then NaN.
  std::string error;
};

struct DegreeSummary {
  int l = 0;
  std::size_t failed = 0;
  std::vector<Summary> columns;
};

struct EnsembleReport {
  EnsembleConfig config;
  std::vector<std::string> columns;
  /// Degree-major, replicate-minor: rows[d * replicates + r].
  std::vector<EnsembleRow> rows;
  std::vector<DegreeSummary> summaries;
  double wall_seconds = 0.0;

  std::size_t column_index(const std::string& name) const;
  /// Successful values of one column at degree l, in replicate order.
  std::vector<double> column(int l, const std::string& name) const;
  const Summary& summary(int l, const std::string& name) const;
};

EnsembleReport run_ensemble(const EnsembleConfig& config, const EnsembleSpec& spec);
EnsembleReport run_ensemble(const EnsembleConfig& config);

/// One draw of W_L(z; r) = L^{-1/2} sum_{l <= Lr} G_l(z) on r = k/L, with
/// independent fields for l = 1..L, and its split W = W_A + W_B into the
/// second-chaos part (J_2 / 2) sqrt(l) h_{l;2} and the residual S_l.
struct PartialSumSample {
  int L = 0;
  std::vector<double> z_levels;
  std::uint64_t master_seed = 0;
  std::uint64_t draw = 0;
  /// Arrays indexed [iz * L + (k - 1)], k = 1..L.
  std::vector<double> W;
  std::vector<double> W_A;
  std::vector<double> W_B;
  /// Per-degree G_l(z), same layout with k = l.
  std::vector<double> G;

  double r(int k) const { return static_cast<double>(k) / L; }
  double at(std::size_t iz, int k) const { return W[iz * static_cast<std::size_t>(L) + static_cast<std::size_t>(k - 1)]; }
  /// W(z_levels[iz]; r) for any r in [0, 1]; zero below 1/L.
  double value(std::size_t iz, double r) const;
};

/// Holds synthesizers for l = 1..L so many draws can share them.
class PartialSumGenerator {
 public:
  PartialSumGenerator(int L, std::vector<double> z_levels, double band_limit_factor = 2.0);
  PartialSumSample draw(std::uint64_t master_seed, std::uint64_t draw) const;
  int max_degree() const { return L_; }

 private:
  int L_;
  std::vector<double> z_;
  std::vector<Synthesizer> synth_;
};

PartialSumSample partial_sum_process(std::uint64_t master_seed, int L, std::span<const double> z_levels,
                                     double band_limit_factor = 2.0, std::uint64_t draw = 0);
std::vector<PartialSumSample> partial_sum_ensemble(std::uint64_t master_seed, int L, std::span<const double> z_levels,
                                                   int draws, int workers = 0, double band_limit_factor = 2.0);

struct GofStatistics {
  /// max |W| over the (z, r) lattice.
  double sup = 0.0;
  /// Trapezoid double integral of W^2 over z in [z_min, z_max] and r in
  /// [0, 1], using W(z; 0) = 0. With one level only the r integral is taken.
  double integral = 0.0;
};

GofStatistics gof_statistics(const PartialSumSample& sample);

/// Covariance of the limiting sheet per unit Var Z: (r1 ^ r2) z1 z2 phi(z1) phi(z2).
/// Under the raw 4 pi sphere measure the W_L covariance converges to
/// 4 pi^2 times this.
double winf_covariance(double z1, double r1, double z2, double r2);

struct CltResult {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double distance = 0.0;
  /// Zero sample spread: the distance is that of a point mass at 0, i.e. 0.5.
  bool degenerate = false;
};

/// Kolmogorov distance of the studentized sample to N(0, 1). ConfigError below 100 samples.
CltResult clt_check(std::span<const double> samples);

}  // namespace sphex
