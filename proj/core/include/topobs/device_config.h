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

#include <optional>
#include <vector>

#include "topobs/model.h"
#include "topobs/profile.h"

namespace topobs {

/// Plain description of a device as read from a run file. The template kind
/// only supplies defaults; explicit fields override them.
struct DeviceConfig {
  enum class Kind { kStationary, kBeamsplitter, kCustom };

  Kind kind = Kind::kBeamsplitter;
  int n_sites = defaults::kSites;
  double kappa0_per_cm = defaults::kKappa0PerCm;
  Rational b_bar = defaults::kBBar;
  /// Unset means "auto": chosen by a localization scan.
  std::optional<double> phi_rad = defaults::kPhi;
  double length_cm = defaults::kLengthCm;
  /// Unset means the template profile. Required for custom devices.
  std::optional<Interpolation> lambda_kind;
  std::vector<Profile::Knot> lambda_breakpoints;
  /// Unset is allowed only for the beamsplitter template before optimization.
  std::optional<double> center_coupling_per_cm;
  GeometryMap geometry;

  /// Throws DomainError describing the offending field.
  void validate() const;
};

std::string_view to_string(DeviceConfig::Kind kind);
DeviceConfig::Kind device_kind_from_string(std::string_view name);

/// Defaults for the two reference devices.
DeviceConfig template_config(DeviceConfig::Kind kind);

Profile lambda_profile(const DeviceConfig& config);

/// Centre coupling to use, falling back to the stationary default for the
/// stationary template. Throws DomainError when none is available.
double center_coupling(const DeviceConfig& config);

/// Phase to use: the configured value, or the first maximizer of edge
/// localization on a 72-point grid.
double resolve_phi(const DeviceConfig& config);

HarperSchedule build_schedule(const DeviceConfig& config, double phi);
DeviceProfile build_device(const DeviceConfig& config, double phi, double center_coupling_per_cm);
/// Shorthand using resolve_phi and center_coupling.
DeviceProfile build_device(const DeviceConfig& config);

}  // namespace topobs
