// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "config.hpp"
#include "theorems.hpp"

namespace actwarp {

inline constexpr const char* kEngineName = "actwarp";
inline constexpr const char* kEngineVersion = "0.1.0";

/// All check names the runner knows, in dependency order.
std::vector<std::string> known_checks();
bool is_known_check(const std::string& name);

struct RunResult {
  std::deque<CheckReport> reports;
  int exit_code = 0;  // 0 all pass, 1 at least one failure
  std::string json;   // machine-readable report (stable keys, deterministic)
  std::string table;  // human-readable summary
  double alpha = 0.0, beta = 0.0;
  std::string ab_source;  // "declared" | "estimated"
};

/// Executes the requested checks (plus their prerequisites) in dependency
/// order. Unknown names raise a validation error. Checks whose
/// preconditions a scenario cannot meet are reported as skipped with a
/// reason, never silently dropped.
RunResult run_checks(const ScenarioConfig& cfg, const std::vector<std::string>& requested);

/// Structure validation only.
RunResult run_validate(const ScenarioConfig& cfg);

/// Structure validation plus the type-constant fit.
RunResult run_estimate(const ScenarioConfig& cfg);

/// Structural analysis: validation, type fit, slant fit, warped
/// certification and the semi-slant split, without the theorem checks.
RunResult run_analyze(const ScenarioConfig& cfg);

/// One report row per parameter value; parameter is one of "theta",
/// "warping-scale", "epsilon-perturbation".
RunResult run_sweep(const ScenarioConfig& cfg, const std::string& parameter,
                    const std::vector<double>& values);

}  // namespace actwarp
