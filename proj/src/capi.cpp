// SPDX-License-Identifier: Apache-2.0
#include "actwarp.h"

#include <cstring>
#include <string>

#include "runner.hpp"

using namespace actwarp;

struct actw_expr {
  Expr expr;
  int dim;
};

struct actw_config {
  ScenarioConfig cfg;
};

struct actw_run {
  RunResult result;
  std::string scenario_id;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

actw_status map_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return ACTW_ERR_DOMAIN;
    case ErrorKind::Parse: return ACTW_ERR_PARSE;
    case ErrorKind::Validation: return ACTW_ERR_VALIDATION;
    case ErrorKind::InvalidArgument: return ACTW_ERR_INVALID_ARGUMENT;
    case ErrorKind::SingularMetric: return ACTW_ERR_SINGULAR;
    case ErrorKind::UnknownModel: return ACTW_ERR_UNKNOWN_MODEL;
    case ErrorKind::Io: return ACTW_ERR_IO;
    case ErrorKind::MissingSplit:
    case ErrorKind::MissingXi:
    case ErrorKind::Precondition: return ACTW_ERR_PRECONDITION;
    default: return ACTW_ERR_NUMERIC;
  }
}

template <class F>
actw_status guarded(F&& fn) noexcept {
  try {
    fn();
    return ACTW_OK;
  } catch (const Error& e) {
    set_error(e.what());
    return map_kind(e.kind());
  } catch (const std::exception& e) {
    set_error(e.what());
    return ACTW_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return ACTW_ERR_INTERNAL;
  }
}

actw_status require(bool ok, const char* what) {
  if (ok) return ACTW_OK;
  set_error(std::string("invalid argument: ") + what);
  return ACTW_ERR_INVALID_ARGUMENT;
}

std::vector<std::string> split_csv(const char* csv) {
  std::vector<std::string> out;
  if (!csv) return out;
  std::string cur;
  for (const char* p = csv;; ++p) {
    if (*p == ',' || *p == '\0') {
      size_t a = cur.find_first_not_of(" \t");
      if (a != std::string::npos) {
        size_t b = cur.find_last_not_of(" \t");
        out.push_back(cur.substr(a, b - a + 1));
      }
      cur.clear();
      if (*p == '\0') break;
    } else {
      cur += *p;
    }
  }
  return out;
}

actw_status finish_run(RunResult&& result, const actw_config* c, actw_run** out) {
  auto* run = new actw_run{std::move(result), c->cfg.scenario.id};
  *out = run;
  return ACTW_OK;
}

}  // namespace

extern "C" {

const char* actw_version(void) { return kEngineVersion; }

const char* actw_last_error(void) { return g_last_error.c_str(); }

actw_status actw_expr_parse(const char* text, int dim, actw_expr** out) {
  if (actw_status s = require(text && out, "text/out"); s != ACTW_OK) return s;
  return guarded([&] { *out = new actw_expr{parse_expr(text, dim), dim}; });
}

void actw_expr_free(actw_expr* e) { delete e; }

actw_status actw_expr_eval(const actw_expr* e, const double* coords, int dim, double* out) {
  if (actw_status s = require(e && coords && out, "expr/coords/out"); s != ACTW_OK) return s;
  if (actw_status s = require(dim >= e->dim, "coordinate count"); s != ACTW_OK) return s;
  return guarded([&] { *out = eval(e->expr, std::span<const double>(coords, dim)); });
}

int actw_jet_size(int dim, int order) {
  if (dim < 0 || dim > 16 || order < 1 || order > 3) return -1;
  return JetSpace::get(dim, order)->size();
}

actw_status actw_expr_jet(const actw_expr* e, const double* coords, int dim, int order,
                          double* coeffs, int coeffs_len) {
  if (actw_status s = require(e && coords && coeffs, "expr/coords/coeffs"); s != ACTW_OK)
    return s;
  int need = actw_jet_size(dim, order);
  if (actw_status s = require(need > 0 && coeffs_len >= need, "coefficient buffer");
      s != ACTW_OK)
    return s;
  return guarded([&] {
    Jet j = eval_jet(e->expr, std::span<const double>(coords, dim), order);
    for (int k = 0; k < need; ++k) coeffs[k] = j.coefficient(k);
  });
}

actw_status actw_config_load(const char* path, actw_config** out) {
  if (actw_status s = require(path && out, "path/out"); s != ACTW_OK) return s;
  return guarded([&] { *out = new actw_config{parse_config_file(path)}; });
}

actw_status actw_config_parse(const char* text, actw_config** out) {
  if (actw_status s = require(text && out, "text/out"); s != ACTW_OK) return s;
  return guarded([&] { *out = new actw_config{parse_config_text(text, "<string>")}; });
}

void actw_config_free(actw_config* c) { delete c; }

void actw_config_set_seed(actw_config* c, uint64_t seed) {
  if (c) c->cfg.scenario.sampling.seed = seed;
}

void actw_config_set_samples(actw_config* c, int count) {
  if (c && count > 0) c->cfg.scenario.sampling.count = count;
}

void actw_config_set_tolerance_identity(actw_config* c, double tol) {
  if (c && tol > 0) c->cfg.scenario.tol_identity = tol;
}

void actw_config_set_tolerance_inequality(actw_config* c, double tol) {
  if (c && tol > 0) c->cfg.scenario.tol_inequality = tol;
}

const char* actw_config_scenario_id(const actw_config* c) {
  return c ? c->cfg.scenario.id.c_str() : "";
}

actw_status actw_run_checks(const actw_config* c, const char* checks_csv, actw_run** out) {
  if (actw_status s = require(c && out, "config/out"); s != ACTW_OK) return s;
  return guarded([&] {
    std::vector<std::string> names = split_csv(checks_csv);
    RunResult r = run_checks(c->cfg, names);
    finish_run(std::move(r), c, out);
  });
}

actw_status actw_run_validate(const actw_config* c, actw_run** out) {
  if (actw_status s = require(c && out, "config/out"); s != ACTW_OK) return s;
  return guarded([&] { finish_run(run_validate(c->cfg), c, out); });
}

actw_status actw_run_estimate_ab(const actw_config* c, actw_run** out) {
  if (actw_status s = require(c && out, "config/out"); s != ACTW_OK) return s;
  return guarded([&] { finish_run(run_estimate(c->cfg), c, out); });
}

actw_status actw_run_analyze(const actw_config* c, actw_run** out) {
  if (actw_status s = require(c && out, "config/out"); s != ACTW_OK) return s;
  return guarded([&] { finish_run(run_analyze(c->cfg), c, out); });
}

actw_status actw_run_sweep(const actw_config* c, const char* parameter, const double* values,
                           int count, actw_run** out) {
  if (actw_status s = require(c && parameter && out, "config/parameter/out"); s != ACTW_OK)
    return s;
  if (actw_status s = require(count <= 0 || values != nullptr, "values"); s != ACTW_OK)
    return s;
  return guarded([&] {
    std::vector<double> v(values, values + std::max(count, 0));
    finish_run(run_sweep(c->cfg, parameter, v), c, out);
  });
}

void actw_run_free(actw_run* r) { delete r; }

int actw_run_exit_code(const actw_run* r) { return r ? r->result.exit_code : 2; }

const char* actw_run_report_json(const actw_run* r) {
  return r ? r->result.json.c_str() : "";
}

const char* actw_run_table(const actw_run* r) { return r ? r->result.table.c_str() : ""; }

double actw_run_alpha(const actw_run* r) { return r ? r->result.alpha : 0.0; }

double actw_run_beta(const actw_run* r) { return r ? r->result.beta : 0.0; }

int actw_known_check_count(void) { return static_cast<int>(known_checks().size()); }

const char* actw_known_check_name(int index) {
  static const std::vector<std::string> names = known_checks();
  if (index < 0 || index >= static_cast<int>(names.size())) return "";
  return names[static_cast<size_t>(index)].c_str();
}

}  // extern "C"
