// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scenario.hpp"

namespace actwarp {

struct ScenarioConfig {
  Scenario scenario;
  std::string label;       // path or "<string>"
  std::string hash;        // fnv1a-64 of the raw text, hex
  std::string immersion_builtin;  // non-empty when the map came from a builder
  double epsilon = 0.0;
};

/// Line-oriented key/value format with [section] headers, '#' comments and
/// expression strings in the x0..x{d-1} grammar. Errors name the line and
/// key. The seed is mandatory.
ScenarioConfig parse_config_text(const std::string& text, const std::string& label);
ScenarioConfig parse_config_file(const std::string& path);

}  // namespace actwarp
