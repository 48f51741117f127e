// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "actwarp.h"

namespace {

std::string scenario_path(const char* name) {
  return std::string(ACTWARP_SCENARIO_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("version and registry") {
  CHECK(std::strlen(actw_version()) > 0);
  int count = actw_known_check_count();
  CHECK(count >= 10);
  bool saw_structure = false;
  for (int i = 0; i < count; ++i)
    if (std::string(actw_known_check_name(i)) == "structure") saw_structure = true;
  CHECK(saw_structure);
  CHECK(std::string(actw_known_check_name(count)) == "");
}

TEST_CASE("expression surface") {
  actw_expr* e = nullptr;
  REQUIRE(actw_expr_parse("sin(x0)*x1 + x0^2", 2, &e) == ACTW_OK);
  double out = 0.0;
  double p[2] = {0.5, 2.0};
  CHECK(actw_expr_eval(e, p, 2, &out) == ACTW_OK);
  CHECK(out == doctest::Approx(std::sin(0.5) * 2.0 + 0.25));

  int size = actw_jet_size(2, 2);
  CHECK(size == 6);
  double coeffs[6];
  CHECK(actw_expr_jet(e, p, 2, 2, coeffs, 6) == ACTW_OK);
  CHECK(coeffs[0] == doctest::Approx(out));
  // degree-1 block in lexicographic order: d/dx0 then d/dx1
  CHECK(coeffs[1] == doctest::Approx(std::cos(0.5) * 2.0 + 1.0));
  CHECK(coeffs[2] == doctest::Approx(std::sin(0.5)));

  CHECK(actw_expr_jet(e, p, 2, 2, coeffs, 3) == ACTW_ERR_INVALID_ARGUMENT);
  actw_expr_free(e);

  CHECK(actw_expr_parse("x5 + 1", 2, &e) == ACTW_ERR_PARSE);
  CHECK(std::strlen(actw_last_error()) > 0);
  CHECK(actw_jet_size(17, 2) == -1);
}

TEST_CASE("domain errors surface through the status") {
  actw_expr* e = nullptr;
  REQUIRE(actw_expr_parse("log(x0)", 1, &e) == ACTW_OK);
  double bad = 0.0, out = 0.0;
  CHECK(actw_expr_eval(e, &bad, 1, &out) == ACTW_ERR_DOMAIN);
  actw_expr_free(e);
}

TEST_CASE("config loading and overrides") {
  actw_config* cfg = nullptr;
  CHECK(actw_config_load("/definitely/not/here.cfg", &cfg) == ACTW_ERR_IO);
  REQUIRE(actw_config_load(scenario_path("s1_kenmotsu.cfg").c_str(), &cfg) == ACTW_OK);
  CHECK(std::string(actw_config_scenario_id(cfg)) == "s1_kenmotsu");
  actw_config_set_samples(cfg, 10);
  actw_config_set_seed(cfg, 42);

  actw_run* run = nullptr;
  REQUIRE(actw_run_checks(cfg, "structure,estimate-ab", &run) == ACTW_OK);
  CHECK(actw_run_exit_code(run) == 0);
  CHECK(actw_run_alpha(run) == 0.0);
  CHECK(actw_run_beta(run) == 1.0);
  std::string json = actw_run_report_json(run);
  CHECK(json.find("\"structure\"") != std::string::npos);
  CHECK(std::strlen(actw_run_table(run)) > 0);
  actw_run_free(run);

  // unknown check names map to the validation status (exit code 2 at the CLI)
  CHECK(actw_run_checks(cfg, "nonsense-check", &run) == ACTW_ERR_VALIDATION);

  // tolerance squeeze: runs fine, reports failure through the exit code
  actw_config_set_tolerance_identity(cfg, 1e-17);
  actw_config_set_tolerance_inequality(cfg, 1e-17);
  REQUIRE(actw_run_checks(cfg, "curvature-bound", &run) == ACTW_OK);
  CHECK(actw_run_exit_code(run) == 1);
  actw_run_free(run);
  actw_config_free(cfg);
}

TEST_CASE("byte-identical reports for identical config and seed") {
  actw_config* cfg = nullptr;
  REQUIRE(actw_config_load(scenario_path("s1_kenmotsu.cfg").c_str(), &cfg) == ACTW_OK);
  actw_config_set_samples(cfg, 12);

  actw_run *a = nullptr, *b = nullptr;
  REQUIRE(actw_run_checks(cfg, "all", &a) == ACTW_OK);
  REQUIRE(actw_run_checks(cfg, "all", &b) == ACTW_OK);
  CHECK(std::string(actw_run_report_json(a)) == actw_run_report_json(b));
  actw_run_free(a);
  actw_run_free(b);
  actw_config_free(cfg);
}

TEST_CASE("analyze, validate, estimate and sweep entry points") {
  actw_config* cfg = nullptr;
  REQUIRE(actw_config_load(scenario_path("s1_kenmotsu.cfg").c_str(), &cfg) == ACTW_OK);
  actw_config_set_samples(cfg, 10);

  actw_run* run = nullptr;
  REQUIRE(actw_run_validate(cfg, &run) == ACTW_OK);
  CHECK(actw_run_exit_code(run) == 0);
  actw_run_free(run);

  REQUIRE(actw_run_estimate_ab(cfg, &run) == ACTW_OK);
  CHECK(actw_run_beta(run) == 1.0);
  actw_run_free(run);

  REQUIRE(actw_run_analyze(cfg, &run) == ACTW_OK);
  CHECK(actw_run_exit_code(run) == 0);
  actw_run_free(run);

  double thetas[3] = {0.5235987755982988, 0.7853981633974483, 1.0471975511965976};
  REQUIRE(actw_run_sweep(cfg, "theta", thetas, 3, &run) == ACTW_OK);
  CHECK(actw_run_exit_code(run) == 0);
  actw_run_free(run);

  CHECK(actw_run_sweep(cfg, "theta", nullptr, 0, &run) == ACTW_ERR_VALIDATION);
  actw_config_free(cfg);
}
