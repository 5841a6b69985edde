// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphex/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <new>
#include <sstream>
#include <thread>

#include "sphex/error.hpp"
#include "sphex/specfun.hpp"

namespace sphex {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string level_label(const char* prefix, double z) {
  std::ostringstream os;
  os << prefix << '(' << std::setprecision(15) << z << ')';
  return os.str();
}

// Per-degree state built once, before the parallel section, and then only read.
struct DegreeResources {
  std::unique_ptr<Synthesizer> synth;
  std::unique_ptr<ThreeJTable> threej;
  std::string error;
};

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first) first = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first) std::rethrow_exception(first);
}

std::shared_ptr<const SphereQuadrature> shared_quadrature(int band_limit) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SphereQuadrature>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(band_limit); it != cache.end()) return it->second;
  }
  auto grid = std::make_shared<const SphereQuadrature>(build_quadrature(band_limit));
  std::lock_guard lock(mutex);
  return cache.try_emplace(band_limit, std::move(grid)).first->second;
}

void EnsembleConfig::validate() const {
  if (degrees.empty()) throw ConfigError("ensemble: no degrees given");
  for (int l : degrees)
    if (l < 1) throw ConfigError("ensemble: degrees must be >= 1");
  if (replicates < 1) throw ConfigError("ensemble: replicates must be >= 1");
  if (!(band_limit_factor >= 1.0)) throw ConfigError("ensemble: band limit factor must be >= 1");
  if (!std::is_sorted(z_levels.begin(), z_levels.end())) throw ConfigError("ensemble: z levels must be sorted");
  for (double z : z_levels)
    if (std::isnan(z)) throw ConfigError("ensemble: z level is NaN");
  if (q_max < 2) throw ConfigError("ensemble: q_max must be >= 2");
}

int EnsembleConfig::band_limit(int l) const {
  const double band = std::ceil(band_limit_factor * static_cast<double>(l) - 1e-9);
  if (band > 1e9) throw ResourceError("ensemble: band limit overflow");
  return std::max(l, static_cast<int>(band));
}

EnsembleSpec standard_statistics(const EnsembleConfig& config) {
  EnsembleSpec spec;
  if (config.mode == EnsembleMode::coefficients) {
    spec.columns = {"power", "h2", "bispectrum", "h3"};
    spec.needs_threej = true;
    spec.evaluate = [](const TaskInput& in, std::span<double> out) {
      out[0] = in.coeffs->power();
      out[1] = h2_from_coefficients(*in.coeffs);
      const BispectrumValue b = bispectrum(*in.coeffs, *in.threej);
      out[2] = b.value;
      out[3] = h3_from_bispectrum(in.l, b.value);
    };
    return spec;
  }
  spec.columns = {"h2", "h3", "h4", "defect", "sup_G", "sup_S"};
  for (double z : config.z_levels) {
    spec.columns.push_back(level_label("Phi", z));
    spec.columns.push_back(level_label("G", z));
    spec.columns.push_back(level_label("S", z));
  }
  spec.evaluate = [](const TaskInput& in, std::span<double> out) {
    const FieldSample& field = *in.field;
    const std::vector<double> h = hermite_transforms(field, 4);
    const ExcursionProfile profile(empirical_measure(field), field.l, h[2]);
    out[0] = h[2];
    out[1] = h[3];
    out[2] = h[4];
    out[3] = defect(field);
    out[4] = profile.sup_abs_process();
    out[5] = profile.sup_abs_residual();
    std::size_t c = 6;
    for (double z : in.config->z_levels) {
      out[c++] = profile.measure(z);
      out[c++] = profile.process(z);
      out[c++] = profile.residual(z);
    }
  };
  return spec;
}

std::size_t EnsembleReport::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ConfigError("ensemble report: unknown column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> EnsembleReport::column(int l, const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  for (const EnsembleRow& row : rows)
    if (row.l == l && row.error.empty()) out.push_back(row.values[c]);
  return out;
}

const Summary& EnsembleReport::summary(int l, const std::string& name) const {
  const std::size_t c = column_index(name);
  for (const DegreeSummary& s : summaries)
    if (s.l == l) return s.columns[c];
  throw ConfigError("ensemble report: degree not in report");
}

EnsembleReport run_ensemble(const EnsembleConfig& config, const EnsembleSpec& spec) {
  config.validate();
  if (!spec.evaluate || spec.columns.empty()) throw ConfigError("ensemble: empty statistic spec");
  const auto start = std::chrono::steady_clock::now();

  const std::size_t n_deg = config.degrees.size();
  const std::size_t n_rep = static_cast<std::size_t>(config.replicates);
  std::vector<DegreeResources> resources(n_deg);
  for (std::size_t d = 0; d < n_deg; ++d) {
    const int l = config.degrees[d];
    try {
      if (config.mode == EnsembleMode::field)
        resources[d].synth = std::make_unique<Synthesizer>(l, shared_quadrature(config.band_limit(l)));
      if (spec.needs_threej) resources[d].threej = std::make_unique<ThreeJTable>(l);
    } catch (const ResourceError& e) {
      resources[d].error = e.what();
    } catch (const std::bad_alloc&) {
      resources[d].error = "out of memory";
    }
  }

  EnsembleReport report;
  report.config = config;
  report.columns = spec.columns;
  report.rows.resize(n_deg * n_rep);
  const std::size_t width = spec.columns.size();

  parallel_for(report.rows.size(), config.workers, [&](std::size_t task) {
    const std::size_t d = task / n_rep;
    const int l = config.degrees[d];
    const int rep = static_cast<int>(task % n_rep);
    EnsembleRow& row = report.rows[task];
    row.l = l;
    row.replicate = rep;
    row.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(l));
    row.values.assign(width, kNaN);
    const DegreeResources& res = resources[d];
    if (!res.error.empty()) {
      row.error = res.error;
      return;
    }
    try {
      const HarmonicCoefficients coeffs = sample_coefficients(l, row.seed);
      TaskInput in;
      in.l = l;
      in.replicate = rep;
      in.seed = row.seed;
      in.coeffs = &coeffs;
      in.threej = res.threej.get();
      in.config = &config;
      if (res.synth) {
        const FieldSample field = res.synth->synthesize(coeffs, row.seed);
        in.field = &field;
        spec.evaluate(in, row.values);
      } else {
        spec.evaluate(in, row.values);
      }
    } catch (const ResourceError& e) {
      row.error = e.what();
      std::fill(row.values.begin(), row.values.end(), kNaN);
    } catch (const std::bad_alloc&) {
      row.error = "out of memory";
      std::fill(row.values.begin(), row.values.end(), kNaN);
    }
  });

  report.summaries.resize(n_deg);
  for (std::size_t d = 0; d < n_deg; ++d) {
    DegreeSummary& s = report.summaries[d];
    s.l = config.degrees[d];
    std::vector<std::vector<double>> cols(width);
    for (std::size_t r = 0; r < n_rep; ++r) {
      const EnsembleRow& row = report.rows[d * n_rep + r];
      if (!row.error.empty()) {
        ++s.failed;
        continue;
      }
      for (std::size_t c = 0; c < width; ++c) cols[c].push_back(row.values[c]);
    }
    for (const auto& col : cols) s.columns.push_back(summarize(col));
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

EnsembleReport run_ensemble(const EnsembleConfig& config) {
  return run_ensemble(config, standard_statistics(config));
}

double PartialSumSample::value(std::size_t iz, double r) const {
  const int k = std::min(L, static_cast<int>(std::floor(r * L + 1e-12)));
  return k < 1 ? 0.0 : at(iz, k);
}

PartialSumGenerator::PartialSumGenerator(int L, std::vector<double> z_levels, double band_limit_factor)
    : L_(L), z_(std::move(z_levels)) {
  if (L < 1) throw ConfigError("partial sums: L must be >= 1");
  if (z_.empty()) throw ConfigError("partial sums: no z levels");
  if (!(band_limit_factor >= 1.0)) throw ConfigError("partial sums: band limit factor must be >= 1");
  synth_.reserve(static_cast<std::size_t>(L));
  for (int l = 1; l <= L; ++l) {
    const int band = std::max(l, static_cast<int>(std::ceil(band_limit_factor * l - 1e-9)));
    synth_.emplace_back(l, shared_quadrature(band));
  }
}

PartialSumSample PartialSumGenerator::draw(std::uint64_t master_seed, std::uint64_t draw) const {
  PartialSumSample s;
  s.L = L_;
  s.z_levels = z_;
  s.master_seed = master_seed;
  s.draw = draw;
  const std::size_t nz = z_.size();
  const std::size_t n = nz * static_cast<std::size_t>(L_);
  s.W.assign(n, 0.0);
  s.W_A.assign(n, 0.0);
  s.W_B.assign(n, 0.0);
  s.G.assign(n, 0.0);
  const double norm = 1.0 / std::sqrt(static_cast<double>(L_));
  std::vector<double> run_g(nz, 0.0), run_a(nz, 0.0), run_b(nz, 0.0);
  for (int l = 1; l <= L_; ++l) {
    const std::uint64_t seed = derive_seed(master_seed, draw, static_cast<std::uint64_t>(l));
    const FieldSample field = synth_[static_cast<std::size_t>(l - 1)].synthesize(sample_coefficients(l, seed), seed);
    const double h2 = hermite_transforms(field, 2)[2];
    const ExcursionProfile profile(empirical_measure(field), l, h2);
    const double root_l = std::sqrt(static_cast<double>(l));
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const double z = z_[iz];
      const double g = profile.process(z);
      const double a = std::isinf(z) ? 0.0 : 0.5 * hermite_coeff_J(2, z) * root_l * h2;
      const std::size_t idx = iz * static_cast<std::size_t>(L_) + static_cast<std::size_t>(l - 1);
      s.G[idx] = g;
      run_g[iz] += g;
      run_a[iz] += a;
      run_b[iz] += profile.residual(z);
      s.W[idx] = norm * run_g[iz];
      s.W_A[idx] = norm * run_a[iz];
      s.W_B[idx] = norm * run_b[iz];
    }
  }
  return s;
}

PartialSumSample partial_sum_process(std::uint64_t master_seed, int L, std::span<const double> z_levels,
                                     double band_limit_factor, std::uint64_t draw) {
  const PartialSumGenerator gen(L, std::vector<double>(z_levels.begin(), z_levels.end()), band_limit_factor);
  return gen.draw(master_seed, draw);
}

std::vector<PartialSumSample> partial_sum_ensemble(std::uint64_t master_seed, int L, std::span<const double> z_levels,
                                                   int draws, int workers, double band_limit_factor) {
  if (draws < 1) throw ConfigError("partial sums: draws must be >= 1");
  const PartialSumGenerator gen(L, std::vector<double>(z_levels.begin(), z_levels.end()), band_limit_factor);
  std::vector<PartialSumSample> out(static_cast<std::size_t>(draws));
  parallel_for(out.size(), workers, [&](std::size_t d) { out[d] = gen.draw(master_seed, d); });
  return out;
}

GofStatistics gof_statistics(const PartialSumSample& sample) {
  GofStatistics g;
  const std::size_t nz = sample.z_levels.size();
  const int L = sample.L;
  for (double w : sample.W) g.sup = std::max(g.sup, std::abs(w));
  if (nz == 0 || L < 1) return g;
  // r integral per level, trapezoid on 0, 1/L, ..., 1 with W(z; 0) = 0.
  std::vector<double> per_level(nz, 0.0);
  const double h = 1.0 / L;
  for (std::size_t iz = 0; iz < nz; ++iz) {
    double prev = 0.0;
    double acc = 0.0;
    for (int k = 1; k <= L; ++k) {
      const double w = sample.at(iz, k);
      const double cur = w * w;
      acc += 0.5 * h * (prev + cur);
      prev = cur;
    }
    per_level[iz] = acc;
  }
  if (nz == 1) {
    g.integral = per_level[0];
    return g;
  }
  for (std::size_t iz = 1; iz < nz; ++iz)
    g.integral += 0.5 * (sample.z_levels[iz] - sample.z_levels[iz - 1]) * (per_level[iz] + per_level[iz - 1]);
  return g;
}

double winf_covariance(double z1, double r1, double z2, double r2) {
  if (!(r1 >= 0.0 && r1 <= 1.0 && r2 >= 0.0 && r2 <= 1.0)) throw DomainError("winf_covariance: r must lie in [0, 1]");
  auto shape = [](double z) { return std::isinf(z) ? 0.0 : z * gauss_pdf(z); };
  return std::min(r1, r2) * shape(z1) * shape(z2);
}

CltResult clt_check(std::span<const double> samples) {
  if (samples.size() < 100) throw ConfigError("clt_check: need at least 100 samples");
  CltResult res;
  res.n = samples.size();
  res.mean = mean(samples);
  const double var = sample_variance(samples);
  res.sd = std::sqrt(std::max(0.0, var));
  std::vector<double> z(samples.size(), 0.0);
  // A constant sample still has a rounding-level spread from its computed mean.
  double scale = 0.0;
  for (double v : samples) scale = std::max(scale, std::abs(v));
  if (!(res.sd > 1e-12 * scale) || !std::isfinite(res.sd)) {
    res.degenerate = true;
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i) z[i] = (samples[i] - res.mean) / res.sd;
  }
  res.distance = kolmogorov_distance_normal(std::move(z));
  return res;
}

}  // namespace sphex
