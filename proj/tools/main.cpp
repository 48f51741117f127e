// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Everything geometric happens behind the C API in
// libactwarp; this program only parses arguments, forwards overrides, prints
// the table and writes the machine report.
#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "actwarp.h"

namespace {

struct ConfigHandle {
  actw_config* c = nullptr;
  ~ConfigHandle() { actw_config_free(c); }
};

struct RunHandle {
  actw_run* r = nullptr;
  ~RunHandle() { actw_run_free(r); }
};

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  bool has_seed = false;
  int samples = 0;
  double tol_identity = 0.0;
  double tol_ineq = 0.0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "scenario config file")->required();
  cmd->add_option("--out", opts.out_dir, "directory for the machine report");
  cmd->add_option("--seed", opts.seed, "override the config seed")
      ->each([&](const std::string&) { opts.has_seed = true; });
  cmd->add_option("--samples", opts.samples, "override the sample count");
  cmd->add_option("--tol-identity", opts.tol_identity, "override the identity tolerance");
  cmd->add_option("--tol-ineq", opts.tol_ineq, "override the inequality tolerance");
}

int load_config(const CommonOpts& opts, ConfigHandle& cfg) {
  actw_status s = actw_config_load(opts.config_path.c_str(), &cfg.c);
  if (s != ACTW_OK) {
    std::cerr << "config error: " << actw_last_error() << "\n";
    return 2;
  }
  if (opts.has_seed) actw_config_set_seed(cfg.c, opts.seed);
  if (opts.samples > 0) actw_config_set_samples(cfg.c, opts.samples);
  if (opts.tol_identity > 0) actw_config_set_tolerance_identity(cfg.c, opts.tol_identity);
  if (opts.tol_ineq > 0) actw_config_set_tolerance_inequality(cfg.c, opts.tol_ineq);
  return 0;
}

int emit(const CommonOpts& opts, const RunHandle& run, const std::string& filename) {
  std::cout << actw_run_table(run.r);
  if (!opts.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) {
      std::cerr << "cannot create output directory: " << ec.message() << "\n";
      return 2;
    }
    std::ofstream out(std::filesystem::path(opts.out_dir) / filename, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write report file\n";
      return 2;
    }
    out << actw_run_report_json(run.r);
  }
  return actw_run_exit_code(run.r);
}

int run_and_emit(const CommonOpts& opts, actw_status s, RunHandle& run,
                 const std::string& filename) {
  if (s != ACTW_OK) {
    std::cerr << "error: " << actw_last_error() << "\n";
    return 2;
  }
  return emit(opts, run, filename);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"actwarp: residual checks for almost-contact structures, immersed "
               "submanifolds and warped products defined by coordinate expressions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", actw_version());

  CommonOpts validate_opts, estimate_opts, analyze_opts, check_opts, sweep_opts;

  CLI::App* validate =
      app.add_subcommand("validate", "check the structure axioms of the ambient model");
  add_common(validate, validate_opts);

  CLI::App* estimate =
      app.add_subcommand("estimate-ab", "fit the type constants of the ambient structure");
  add_common(estimate, estimate_opts);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "structural analysis: axioms, type fit, slant fit, certification");
  add_common(analyze, analyze_opts);

  std::vector<std::string> check_names;
  CLI::App* check = app.add_subcommand("check", "run named checks (or 'all')");
  check->add_option("names", check_names, "check names or 'all'")->expected(-1);
  add_common(check, check_opts);

  std::string sweep_param;
  std::string sweep_values;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "re-run bound checks across a parameter (theta, warping-scale, "
               "epsilon-perturbation)");
  sweep->add_option("parameter", sweep_param, "swept parameter")->required();
  sweep->add_option("values", sweep_values, "comma-separated values")->required();
  add_common(sweep, sweep_opts);

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) {
    ConfigHandle cfg;
    if (int rc = load_config(validate_opts, cfg)) return rc;
    RunHandle run;
    return run_and_emit(validate_opts, actw_run_validate(cfg.c, &run.r), run, "report.json");
  }
  if (estimate->parsed()) {
    ConfigHandle cfg;
    if (int rc = load_config(estimate_opts, cfg)) return rc;
    RunHandle run;
    actw_status s = actw_run_estimate_ab(cfg.c, &run.r);
    if (s == ACTW_OK)
      std::cout << "alpha = " << actw_run_alpha(run.r) << ", beta = " << actw_run_beta(run.r)
                << "\n";
    return run_and_emit(estimate_opts, s, run, "report.json");
  }
  if (analyze->parsed()) {
    ConfigHandle cfg;
    if (int rc = load_config(analyze_opts, cfg)) return rc;
    RunHandle run;
    return run_and_emit(analyze_opts, actw_run_analyze(cfg.c, &run.r), run, "report.json");
  }
  if (check->parsed()) {
    ConfigHandle cfg;
    if (int rc = load_config(check_opts, cfg)) return rc;
    std::string csv;
    for (const std::string& name : check_names) {
      if (!csv.empty()) csv += ",";
      csv += name;
    }
    RunHandle run;
    actw_status s = actw_run_checks(cfg.c, csv.empty() ? nullptr : csv.c_str(), &run.r);
    return run_and_emit(check_opts, s, run, "report.json");
  }
  if (sweep->parsed()) {
    ConfigHandle cfg;
    if (int rc = load_config(sweep_opts, cfg)) return rc;
    std::vector<double> values;
    std::string cur;
    for (size_t i = 0; i <= sweep_values.size(); ++i) {
      if (i == sweep_values.size() || sweep_values[i] == ',') {
        if (!cur.empty()) {
          try {
            values.push_back(std::stod(cur));
          } catch (...) {
            std::cerr << "bad sweep value '" << cur << "'\n";
            return 2;
          }
        }
        cur.clear();
      } else {
        cur += sweep_values[i];
      }
    }
    RunHandle run;
    actw_status s =
        actw_run_sweep(cfg.c, sweep_param.c_str(), values.data(),
                       static_cast<int>(values.size()), &run.r);
    return run_and_emit(sweep_opts, s, run, "sweep.json");
  }
  return 2;
}
