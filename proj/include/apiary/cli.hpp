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
#include <ostream>
#include <string>
#include <vector>

namespace apiary::cli {

/// Process exit codes. Stable; documented in the README.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kStarvation = 2,
  kMarketInfeasible = 3,
};

struct Command {
  std::string name;  // run | field | market | check
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::vector<std::string> overrides;  // key=value, applied in order
};

// Data summaries go to `out`, diagnostics to `err`.
int cmd_run(const Command& cmd, std::ostream& out, std::ostream& err);
int cmd_field(const Command& cmd, std::ostream& out, std::ostream& err);
int cmd_market(const Command& cmd, std::ostream& out, std::ostream& err);
int cmd_check(const Command& cmd, std::ostream& out, std::ostream& err);

int dispatch(const Command& cmd, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Usage errors exit with kConfigError.
int main_entry(int argc, char** argv);

}  // namespace apiary::cli
