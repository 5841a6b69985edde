// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli_commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "sphex/error.hpp"
#include "sphex/excursion.hpp"
#include "sphex/field.hpp"
#include "sphex/harness.hpp"
#include "sphex/simd/kernels.hpp"
#include "sphex/specfun.hpp"
#include "sphex/stats.hpp"
#include "sphex/wigner.hpp"

namespace sphex::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

double parse_real(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (pos != s.size() || std::isnan(v)) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  }
  return v.dump();
}

json number(double v) { return json(v); }

std::vector<int> degrees_of(const CommonOptions& o) {
  if (o.degrees.empty()) return {o.l};
  return parse_degrees(o.degrees);
}

json echo(const CommonOptions& o) {
  return json{{"seed", o.seed},       {"l", o.l},           {"degrees", o.degrees},
              {"replicates", o.replicates}, {"z", o.z},     {"qmax", o.qmax},
              {"workers", o.workers}, {"band_factor", o.band_factor},
              {"isa", simd::isa_name(simd::active_isa())}};
}

void require_degree(int l) {
  if (l < 1) throw ConfigError("degree must be >= 1");
}

int band_for(const CommonOptions& o, int l) {
  if (!(o.band_factor >= 1.0)) throw ConfigError("band factor must be >= 1");
  return std::max(l, static_cast<int>(std::ceil(o.band_factor * l - 1e-9)));
}

FieldSample sample_one(const CommonOptions& o) {
  require_degree(o.l);
  const auto grid = std::make_shared<const SphereQuadrature>(build_quadrature(band_for(o, o.l)));
  const std::uint64_t seed = derive_seed(o.seed, o.draw, static_cast<std::uint64_t>(o.l));
  const Synthesizer synth(o.l, grid);
  return synth.synthesize(sample_coefficients(o.l, seed), seed);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ResourceError("cannot open output file '" + path + "'");
  return f;
}

void write_side_outputs(const CommonOptions& o, const FieldSample& field) {
  if (!o.dump_field.empty()) {
    std::ofstream f = open_output(o.dump_field);
    write_field_csv(f, field);
  }
  if (!o.transforms.empty()) {
    const int qmax = std::min(std::max(o.qmax, 1), simd::kMaxHermiteOrder);
    const std::vector<double> h = hermite_transforms(field, qmax);
    std::ofstream f = open_output(o.transforms);
    f << "l,q,value\n";
    for (int q = 1; q <= qmax; ++q) f << field.l << ',' << q << ',' << cell(number(h[static_cast<std::size_t>(q)])) << '\n';
  }
}

EnsembleConfig ensemble_config(const CommonOptions& o, EnsembleMode mode) {
  EnsembleConfig c;
  c.master_seed = o.seed;
  c.degrees = degrees_of(o);
  c.replicates = o.replicates;
  c.band_limit_factor = o.band_factor;
  c.z_levels = parse_levels(o.z);
  c.q_max = o.qmax;
  c.workers = o.workers;
  c.mode = mode;
  return c;
}

}  // namespace

std::vector<int> parse_degrees(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw ConfigError("empty degree list");
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int a = parse_int(trim(text.substr(0, dots)));
    const int b = parse_int(trim(text.substr(dots + 2)));
    if (a > b) throw ConfigError("degree range a..b needs a <= b");
    for (int l = a; l <= b; ++l) out.push_back(l);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_int(trim(item)));
  }
  for (int l : out) require_degree(l);
  return out;
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item));
  if (out.empty()) throw ConfigError("empty z level list");
  return out;
}

void emit(const Table& table, const std::string& format, const std::string& out_path) {
  std::ofstream file;
  if (!out_path.empty()) file = open_output(out_path);
  std::ostream& os = out_path.empty() ? std::cout : file;
  if (format == "json") {
    json doc;
    doc["command"] = table.command;
    doc["config"] = table.config;
    doc["columns"] = table.columns;
    json rows = json::array();
    for (const json& row : table.rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < table.columns.size(); ++c) obj[table.columns[c]] = row[c];
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
  } else if (format == "csv") {
    if (table.header) {
      for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
      os << '\n';
    }
    for (const json& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell(row[c]);
      os << '\n';
    }
  } else {
    throw ConfigError("unknown format '" + format + "'");
  }
  if (!os) throw ResourceError("write failed");
}

Table sample_field(const CommonOptions& o) {
  const FieldSample field = sample_one(o);
  write_side_outputs(o, field);
  Table t{"sample-field", {"theta", "phi", "weight", "value"}};
  t.config = echo(o);
  t.config["band_limit"] = field.grid->band_limit();
  t.config["nodes"] = field.grid->size();
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const GridPoint p = field.grid->point(i);
    t.rows.push_back(json::array({p.theta, p.phi, p.weight, field.values[i]}));
  }
  return t;
}

Table excursion_curve(const CommonOptions& o) {
  const FieldSample field = sample_one(o);
  write_side_outputs(o, field);
  const ExcursionProfile profile(field);
  Table t{"excursion-curve", {"z", "phi", "G", "S"}};
  t.config = echo(o);
  t.config["h2"] = profile.h2();
  t.config["sup_G"] = profile.sup_abs_process();
  t.config["sup_S"] = profile.sup_abs_residual();
  const auto knots = profile.curve().knots();
  for (double z : knots) t.rows.push_back(json::array({z, profile.measure(z), profile.process(z), profile.residual(z)}));
  return t;
}

Table variance_study(const CommonOptions& o) {
  const EnsembleConfig cfg = ensemble_config(o, EnsembleMode::field);
  cfg.validate();
  Table t{"variance-study", {"l", "z", "series", "tail_bound", "residual_series", "mc_variance", "mc_se"}};
  t.config = echo(o);
  EnsembleReport report;
  const bool mc = o.replicates >= 2;
  if (mc) report = run_ensemble(cfg);
  for (int l : cfg.degrees) {
    const LegendreMomentTable table(l, std::max(cfg.q_max, 4));
    for (double z : cfg.z_levels) {
      const VarianceSeries s = variance_series(table, z, cfg.q_max, 2);
      const VarianceSeries r = variance_series(table, z, cfg.q_max, 3);
      double v = std::numeric_limits<double>::quiet_NaN(), se = v;
      if (mc) {
        std::ostringstream name;
        name << "Phi(" << std::setprecision(15) << z << ')';
        const Summary& sm = report.summary(l, name.str());
        v = sm.variance;
        se = sm.se_variance;
      }
      t.rows.push_back(json::array({l, z, s.value, s.tail_bound, r.value, v, se}));
    }
  }
  return t;
}

Table reduction_study(const CommonOptions& o) {
  EnsembleConfig cfg = ensemble_config(o, EnsembleMode::field);
  const EnsembleReport report = run_ensemble(cfg);
  Table t{"reduction-study", {"l", "replicates", "median_sup_S", "mean_sup_S", "median_sup_G", "mean_sup_G"}};
  t.config = echo(o);
  for (int l : cfg.degrees) {
    const std::vector<double> s = report.column(l, "sup_S");
    const std::vector<double> g = report.column(l, "sup_G");
    t.rows.push_back(json::array({l, s.size(), median(s), mean(s), median(g), mean(g)}));
  }
  return t;
}

Table wigner(const WignerOptions& o) {
  Table t{"wigner", {"l1", "l2", "l3", "m1", "m2", "m3", "value"}};
  const double v = wigner3j(o.l1, o.l2, o.l3, o.m1, o.m2, o.m3);
  t.rows.push_back(json::array({o.l1, o.l2, o.l3, o.m1, o.m2, o.m3, v}));
  return t;
}

Table moments(const CommonOptions& o, int q) {
  if (o.l < 0) throw ConfigError("degree must be >= 0");
  if (q < 0) throw ConfigError("moment order must be >= 0");
  Table t{"moments", {"l", "q", "value"}};
  t.header = false;
  t.rows.push_back(json::array({o.l, q, legendre_moment(o.l, q)}));
  return t;
}

Table bispectrum(const CommonOptions& o) {
  const EnsembleConfig cfg = ensemble_config(o, EnsembleMode::coefficients);
  const EnsembleReport report = run_ensemble(cfg);
  Table t{"bispectrum", {"l", "replicates", "mean", "se_mean", "mean_square", "se_mean_square", "odd_degree"}};
  t.config = echo(o);
  for (int l : cfg.degrees) {
    const std::vector<double> b = report.column(l, "bispectrum");
    std::vector<double> sq(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) sq[i] = b[i] * b[i];
    const Summary sb = summarize(b);
    const Summary ss = summarize(sq);
    t.rows.push_back(json::array({l, b.size(), sb.mean, sb.se_mean, ss.mean, ss.se_mean, l % 2 != 0}));
  }
  return t;
}

Table partial_sum(const CommonOptions& o) {
  require_degree(o.l);
  const std::vector<double> z = parse_levels(o.z);
  const PartialSumSample s = partial_sum_process(o.seed, o.l, z, o.band_factor, o.draw);
  Table t{"partial-sum", {"z", "r", "W", "W_A", "W_B"}};
  t.config = echo(o);
  t.config["draw"] = o.draw;
  for (std::size_t iz = 0; iz < z.size(); ++iz) {
    for (int k = 1; k <= s.L; ++k) {
      const std::size_t idx = iz * static_cast<std::size_t>(s.L) + static_cast<std::size_t>(k - 1);
      t.rows.push_back(json::array({z[iz], s.r(k), s.W[idx], s.W_A[idx], s.W_B[idx]}));
    }
  }
  return t;
}

Table gof(const CommonOptions& o) {
  require_degree(o.l);
  if (o.replicates < 1) throw ConfigError("replicates must be >= 1");
  const std::vector<double> z = parse_levels(o.z);
  const std::vector<PartialSumSample> draws = partial_sum_ensemble(o.seed, o.l, z, o.replicates, o.workers, o.band_factor);
  Table t{"gof", {"draw", "S_L", "K_L", "sup_W_B"}};
  t.config = echo(o);
  for (const PartialSumSample& s : draws) {
    const GofStatistics g = gof_statistics(s);
    double sup_b = 0.0;
    for (double w : s.W_B) sup_b = std::max(sup_b, std::abs(w));
    t.rows.push_back(json::array({s.draw, g.sup, g.integral, sup_b}));
  }
  return t;
}

Table clt_check(const CommonOptions& o) {
  std::vector<double> samples;
  json cfg = echo(o);
  if (!o.input.empty()) {
    std::ifstream in(o.input);
    if (!in) throw ResourceError("cannot open input file '" + o.input + "'");
    std::string line;
    while (std::getline(in, line)) {
      const std::string s = trim(line.substr(0, line.find(',')));
      if (s.empty()) continue;
      try {
        samples.push_back(parse_real(s));
      } catch (const ConfigError&) {
        if (!samples.empty()) throw;  // tolerate a header line only
      }
    }
    cfg["input"] = o.input;
  } else {
    EnsembleMode mode = EnsembleMode::field;
    if (o.mode == "coefficients") {
      mode = EnsembleMode::coefficients;
    } else if (o.mode != "field") {
      throw ConfigError("unknown mode '" + o.mode + "'");
    }
    EnsembleConfig c = ensemble_config(o, mode);
    c.degrees = {o.l};
    c.z_levels = {0.0};
    EnsembleSpec spec;
    spec.columns = {"h2"};
    spec.evaluate = [](const TaskInput& in, std::span<double> out) {
      const double h2 = in.field ? hermite_transforms(*in.field, 2)[2] : h2_from_coefficients(*in.coeffs);
      out[0] = std::sqrt(static_cast<double>(in.l)) * h2;
    };
    samples = run_ensemble(c, spec).column(o.l, "h2");
    cfg["statistic"] = "sqrt(l) h2";
    cfg["mode"] = o.mode;
  }
  const CltResult r = sphex::clt_check(samples);
  Table t{"clt-check", {"n", "mean", "sd", "distance", "degenerate"}};
  t.config = cfg;
  t.rows.push_back(json::array({r.n, r.mean, r.sd, r.distance, r.degenerate}));
  return t;
}

}  // namespace sphex::cli
