// Copyright 2026 The qsdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qsdet::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

/// Runs one command line (args excludes the program name) and writes JSON
/// lines to `out`, or to the file named by --output. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Value rounded to 12 significant decimal digits.
double round12(double value);

/// Copy of a record with every "wallclock_ms" member removed, at any depth.
nlohmann::json strip_timing(const nlohmann::json& record);

/// Command line that reproduces a run from the "config" member of one of
/// its records.
std::vector<std::string> args_from_config(const nlohmann::json& config);

}  // namespace qsdet::cli
