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

#include "topobs/device_config.h"

#include <cmath>
#include <sstream>
#include <string>

#include "topobs/design.h"
#include "topobs/error.h"

namespace topobs {

namespace {

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw DomainError(field + ": " + message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string_view to_string(DeviceConfig::Kind kind) {
  switch (kind) {
    case DeviceConfig::Kind::kStationary:
      return "stationary";
    case DeviceConfig::Kind::kBeamsplitter:
      return "beamsplitter";
    case DeviceConfig::Kind::kCustom:
      return "custom";
  }
  return "custom";
}

DeviceConfig::Kind device_kind_from_string(std::string_view name) {
  if (name == "stationary") return DeviceConfig::Kind::kStationary;
  if (name == "beamsplitter") return DeviceConfig::Kind::kBeamsplitter;
  if (name == "custom") return DeviceConfig::Kind::kCustom;
  throw DomainError("unknown device kind '" + std::string(name) +
                    "' (expected stationary, beamsplitter or custom)");
}

DeviceConfig template_config(DeviceConfig::Kind kind) {
  DeviceConfig config;
  config.kind = kind;
  if (kind == DeviceConfig::Kind::kStationary) {
    config.center_coupling_per_cm = defaults::kStationaryCenterPerCm;
  }
  return config;
}

void DeviceConfig::validate() const {
  require(n_sites >= 4 && n_sites % 2 == 0, "n_sites", "must be an even integer >= 4");
  require(finite_positive(kappa0_per_cm), "kappa0_per_cm", "must be positive and finite");
  require(b_bar.denominator > 0, "b_bar.denominator", "must be positive");
  require(finite_positive(length_cm), "length_cm", "must be positive and finite");
  if (phi_rad) require(std::isfinite(*phi_rad), "phi_rad", "must be finite");
  if (center_coupling_per_cm) {
    require(finite_positive(*center_coupling_per_cm), "center_coupling_per_cm",
            "must be positive and finite");
  }
  require(finite_positive(geometry.amplitude_a_per_cm), "geometry.a_per_cm",
          "must be positive and finite");
  require(finite_positive(geometry.decay_b_per_um), "geometry.b_per_um",
          "must be positive and finite");
  if (kind == Kind::kCustom) {
    require(lambda_kind.has_value(), "lambda_profile", "required for custom devices");
  }
  if (lambda_kind) {
    const std::size_t min_knots = *lambda_kind == Interpolation::kConstant ? 1 : 2;
    require(lambda_breakpoints.size() >= min_knots, "lambda_profile.breakpoints",
            "needs at least " + std::to_string(min_knots) + " breakpoint(s)");
    for (std::size_t i = 0; i < lambda_breakpoints.size(); ++i) {
      const auto& k = lambda_breakpoints[i];
      const std::string where = "lambda_profile.breakpoints[" + std::to_string(i) + "]";
      require(std::isfinite(k.z) && std::isfinite(k.value), where, "must be finite");
      require(k.value >= 0.0 && k.value < 1.0, where, "modulation depth must lie in [0, 1)");
    }
    if (*lambda_kind != Interpolation::kConstant) {
      require(lambda_breakpoints.front().z <= 0.0 && lambda_breakpoints.back().z >= length_cm,
              "lambda_profile.breakpoints", "must cover [0, length_cm]");
    }
  }
}

Profile lambda_profile(const DeviceConfig& config) {
  if (!config.lambda_kind) {
    const DeviceKind kind = config.kind == DeviceConfig::Kind::kStationary
                                ? DeviceKind::kStationary
                                : DeviceKind::kBeamsplitter;
    return template_lambda_profile(kind, config.length_cm);
  }
  if (*config.lambda_kind == Interpolation::kConstant) {
    return Profile::constant(config.lambda_breakpoints.front().value);
  }
  return Profile::interpolated(*config.lambda_kind, config.lambda_breakpoints);
}

double center_coupling(const DeviceConfig& config) {
  if (config.center_coupling_per_cm) return *config.center_coupling_per_cm;
  if (config.kind == DeviceConfig::Kind::kStationary) return defaults::kStationaryCenterPerCm;
  throw DomainError("center_coupling_per_cm: required for this device (run optimize first)");
}

HarperSchedule build_schedule(const DeviceConfig& config, double phi) {
  config.validate();
  return HarperSchedule(config.n_sites, config.kappa0_per_cm, config.b_bar,
                        lambda_profile(config), Profile::constant(phi), config.length_cm);
}

DeviceProfile build_device(const DeviceConfig& config, double phi,
                           double center_coupling_per_cm) {
  return harper_device(build_schedule(config, phi),
                       Profile::constant(center_coupling_per_cm));
}

double resolve_phi(const DeviceConfig& config) {
  if (config.phi_rad) return *config.phi_rad;
  const double probe = config.center_coupling_per_cm.value_or(defaults::kStationaryCenterPerCm);
  return select_phi([&](double phi) { return build_device(config, phi, probe); }, phase_grid(72))
      .parameter;
}

DeviceProfile build_device(const DeviceConfig& config) {
  return build_device(config, resolve_phi(config), center_coupling(config));
}

}  // namespace topobs
