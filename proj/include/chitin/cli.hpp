// Copyright 2026 The Chitin Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "chitin/features.hpp"
#include "chitin/model.hpp"

namespace chitin {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Settings shared by every subcommand; echoed into each output's provenance.
struct RunConfig {
  double sample_rate = 44100.0;
  double window_seconds = 1.0;
  int n_mfcc = 40;
  Stats stats = Stats::Mean;
  std::size_t per_class = 30;  // 0 keeps every instance
  std::uint64_t seed = 42;
  std::vector<Family> families = all_families();
  std::filesystem::path out = "out";
};

nlohmann::json to_json(const RunConfig& cfg);

/// Runs the command line (without the program name). Returns 0 on success,
/// 1 on a runtime or contract failure, 2 on a usage error.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace chitin
