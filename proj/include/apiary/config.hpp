// Copyright 2026 The Apiary Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "apiary/market.hpp"
#include "apiary/sim.hpp"

namespace apiary::config {

inline constexpr int kSchemaVersion = 1;

/// Carries every problem found in a configuration, one message per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

nlohmann::json read_json(const std::filesystem::path& path);

/// Applies `a.b.c=value`. The value is parsed as JSON when it parses, else
/// taken as a string. Intermediate objects are created on demand.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Builds a scenario from a configuration document. Relative file paths
/// resolve against `base_dir`. Missing optional keys take their defaults.
/// Throws ConfigError listing all problems, including invariant violations.
sim::Scenario scenario_from_json(const nlohmann::json& doc,
                                 const std::filesystem::path& base_dir);

struct FieldConfig {
  flora::Landscape landscape;
  flora::ForagingParams foraging;
  int hive_row = 0;
  int hive_col = 0;
};

/// Reads only the landscape and foraging sections.
FieldConfig field_config_from_json(const nlohmann::json& doc,
                                   const std::filesystem::path& base_dir);

/// Parses a stored allocation (as written by to_json) for the balanced regime.
market::ExchangeSolution solution_from_json(const nlohmann::json& j);

WeatherSeries parse_weather_csv(const std::string& text);

}  // namespace apiary::config
