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
#include <optional>
#include <stdexcept>
#include <string>

#include "topobs/design.h"
#include "topobs/device_config.h"
#include "topobs/twophoton.h"

namespace topobs::cli {

/// Invalid or unreadable run configuration. The message carries the field
/// path and, where it can be located, the line in the source file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BandsSection {
  int n_samples = 101;
};

struct PropagateSection {
  Side side = Side::kLeft;
  int steps = 0;
  int map_rows = 201;
  int leakage_checkpoints = 41;
};

struct HomSection {
  double overlap_at_zero = 1.0;
  double coherence_width_ps = 1.0;
  double delay_min_ps = -5.0;
  double delay_max_ps = 5.0;
  int delay_count = 101;
  double far_delay_ps = 4.0;
  /// Mean number of photon pairs per delay setting for count sampling.
  double pairs_per_delay = 1e5;
  int steps = 0;
  /// Reference visibility for the relative figure, e.g. a fibre splitter.
  std::optional<Measured> reference_visibility;
};

struct OptimizeSection {
  CenterCouplingOptions options;
};

struct LayoutSection {
  double pitch_cm = 0.01;
  double anchor_um = 0.0;
};

struct FidelitySection {
  std::string simulated;
  std::string measured;
};

struct RunConfig {
  std::filesystem::path source;
  std::optional<DeviceConfig> device;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  BandsSection bands;
  PropagateSection propagate;
  HomSection hom;
  OptimizeSection optimize;
  LayoutSection layout;
  std::optional<FidelitySection> fidelity;
};

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& source = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Serializes the configuration back into the run-file schema.
std::string dump_run_config(const RunConfig& config);

Side side_from_string(const std::string& name);
std::string to_string(Side side);

}  // namespace topobs::cli
