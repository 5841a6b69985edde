// Copyright 2026 The sphex Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <functional>
#include <iomanip>
#include <iostream>
#include <new>

#include "cli_commands.hpp"
#include "sphex/error.hpp"
#include "sphex/wigner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

using sphex::cli::CommonOptions;
using sphex::cli::Table;

void add_output_flags(CLI::App* sub, std::string& format, std::string& out) {
  sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", out, "Write output to PATH instead of stdout");
}

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--l", o.l, "Degree (or maximum degree L for partial sums)");
  sub->add_option("--degrees", o.degrees, "Degrees: a..b, a,b,c or a");
  sub->add_option("--replicates", o.replicates, "Replicates per degree");
  sub->add_option("--z", o.z, "Comma separated levels");
  sub->add_option("--qmax", o.qmax, "Hermite series truncation");
  sub->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  sub->add_option("--band-factor", o.band_factor, "Grid band limit as a multiple of l");
  sub->add_option("--draw", o.draw, "Draw index for single-sample commands");
  add_output_flags(sub, o.format, o.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sphex: excursion statistics of Gaussian spherical eigenfunctions"};
  app.require_subcommand(1);

  // Each subcommand owns its option block; at most one runs.
  std::vector<std::unique_ptr<CommonOptions>> blocks;
  std::function<Table()> action;
  std::string* format = nullptr;
  std::string* out = nullptr;

  auto common = [&](const char* name, const char* help, int replicates,
                    std::function<Table(const CommonOptions&)> fn) {
    blocks.push_back(std::make_unique<CommonOptions>());
    CommonOptions& o = *blocks.back();
    o.replicates = replicates;
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, o);
    sub->callback([&, fn, ptr = &o] {
      action = [fn, ptr] { return fn(*ptr); };
      format = &ptr->format;
      out = &ptr->out;
    });
    return std::pair<CLI::App*, CommonOptions*>{sub, &o};
  };

  {
    auto [sub, o] = common("sample-field", "Sample one field on the quadrature grid", 1, sphex::cli::sample_field);
    sub->add_option("--dump-field", o->dump_field, "Also write theta,phi,weight,value to PATH");
    sub->add_option("--transforms", o->transforms, "Write Hermite transforms l,q,value to PATH");
  }
  {
    auto [sub, o] = common("excursion-curve", "Empirical measure, G and S at every knot", 1, sphex::cli::excursion_curve);
    sub->add_option("--dump-field", o->dump_field, "Also write theta,phi,weight,value to PATH");
    sub->add_option("--transforms", o->transforms, "Write Hermite transforms l,q,value to PATH");
  }
  common("variance-study", "Exact variance series against Monte Carlo", 200, sphex::cli::variance_study);
  common("reduction-study", "Sup norms of the reduction residual across degrees", 200, sphex::cli::reduction_study);
  common("bispectrum", "Normalized bispectrum moments", 1000, sphex::cli::bispectrum);
  common("partial-sum", "One draw of the partial-sum process W_L(z; r)", 1, sphex::cli::partial_sum);
  common("gof", "Goodness-of-fit statistics over draws of W_L", 100, sphex::cli::gof);
  {
    auto [sub, o] = common("clt-check", "Kolmogorov distance of studentized sqrt(l) h2 to N(0,1)", 2000,
                           sphex::cli::clt_check);
    sub->add_option("--mode", o->mode, "field or coefficients")->check(CLI::IsMember({"field", "coefficients"}));
    sub->add_option("--input", o->input, "Read samples (first CSV column) from PATH instead");
  }

  int moment_order = 0;
  {
    auto [sub, o] = common("moments", "Legendre moment int_{-1}^{1} P_l^q", 1, nullptr);
    sub->add_option("--q", moment_order, "Power q")->required();
    CommonOptions* ptr = o;
    sub->callback([&, ptr] {
      action = [ptr, &moment_order] { return sphex::cli::moments(*ptr, moment_order); };
      format = &ptr->format;
      out = &ptr->out;
    });
  }

  sphex::cli::WignerOptions w;
  bool wigner_run = false;
  {
    CLI::App* sub = app.add_subcommand("wigner", "Wigner 3j symbol");
    sub->add_option("--l1", w.l1)->required();
    sub->add_option("--l2", w.l2)->required();
    sub->add_option("--l3", w.l3)->required();
    sub->add_option("--m1", w.m1);
    sub->add_option("--m2", w.m2);
    sub->add_option("--m3", w.m3);
    add_output_flags(sub, w.format, w.out);
    sub->callback([&] { wigner_run = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (wigner_run) {
      const Table t = sphex::cli::wigner(w);
      if (w.format == "json") {
        sphex::cli::emit(t, w.format, w.out);
      } else {
        const double v = t.rows[0][6].get<double>();
        if (w.out.empty()) {
          std::cout << std::setprecision(17) << v << '\n';
        } else {
          Table scalar{"wigner", {"value"}};
          scalar.header = false;
          scalar.rows.push_back(nlohmann::json::array({v}));
          sphex::cli::emit(scalar, "csv", w.out);
        }
      }
      return 0;
    }
    const Table t = action();
    sphex::cli::emit(t, *format, *out);
    return 0;
  } catch (const sphex::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: out of memory\n";
    return kExitResource;
  } catch (const sphex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sphex::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
