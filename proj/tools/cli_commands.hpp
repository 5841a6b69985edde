// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace sphex::cli {

struct CommonOptions {
  std::uint64_t seed = 1;
  int l = 16;
  std::string degrees;
  int replicates = 100;
  std::string z = "-2,-1,0,1,2";
  int qmax = 60;
  int workers = 0;
  double band_factor = 2.0;
  std::string out;
  std::string format = "csv";
  std::string dump_field;
  std::string transforms;
  std::uint64_t draw = 0;
  std::string mode = "field";
  std::string input;
};

struct WignerOptions {
  int l1 = 0, l2 = 0, l3 = 0;
  int m1 = 0, m2 = 0, m3 = 0;
  std::string format = "csv";
  std::string out;
};

/// Rows of one result; CSV renders header plus rows, JSON adds the config echo.
struct Table {
  std::string command;
  std::vector<std::string> columns;
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json config = nlohmann::json::object();
  bool header = true;
};

/// "a..b", "a,b,c" or "a".
std::vector<int> parse_degrees(const std::string& text);
/// Comma separated reals; accepts inf and -inf.
std::vector<double> parse_levels(const std::string& text);

void emit(const Table& table, const std::string& format, const std::string& out_path);

Table sample_field(const CommonOptions& o);
Table excursion_curve(const CommonOptions& o);
Table variance_study(const CommonOptions& o);
Table reduction_study(const CommonOptions& o);
Table wigner(const WignerOptions& o);
Table moments(const CommonOptions& o, int q);
Table bispectrum(const CommonOptions& o);
Table partial_sum(const CommonOptions& o);
Table gof(const CommonOptions& o);
Table clt_check(const CommonOptions& o);

}  // namespace sphex::cli
