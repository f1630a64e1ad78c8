// Copyright 2026 The topobs Authors
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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/run_config.h"

namespace topobs::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitOptimization = 4,
};

/// Command-line flags that take precedence over the run file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<Side> side;
  std::optional<int> steps;
};

using Written = std::vector<std::filesystem::path>;

Written cmd_bands(const RunConfig& config, const Overrides& flags);
Written cmd_propagate(const RunConfig& config, const Overrides& flags);
Written cmd_hom(const RunConfig& config, const Overrides& flags);
Written cmd_optimize(const RunConfig& config, const Overrides& flags);
Written cmd_layout(const RunConfig& config, const Overrides& flags);
/// Either file may be empty, in which case the run file's fidelity section
/// supplies it.
Written cmd_fidelity(const std::optional<RunConfig>& config, const Overrides& flags,
                     const std::string& simulated, const std::string& measured);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace topobs::cli
