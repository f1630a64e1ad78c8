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

#include "topobs/profile.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "topobs/error.h"

namespace topobs {

std::string_view to_string(Interpolation kind) {
  switch (kind) {
    case Interpolation::kConstant:
      return "constant";
    case Interpolation::kLinear:
      return "linear";
    case Interpolation::kRaisedCosine:
      return "raised_cosine";
  }
  return "unknown";
}

Interpolation interpolation_from_string(std::string_view name) {
  if (name == "constant") return Interpolation::kConstant;
  if (name == "linear") return Interpolation::kLinear;
  if (name == "raised_cosine") return Interpolation::kRaisedCosine;
  throw DomainError("unknown profile kind '" + std::string(name) +
                    "' (expected constant, linear or raised_cosine)");
}

Profile Profile::constant(double value) {
  if (!std::isfinite(value)) throw DomainError("constant profile value is not finite");
  return Profile(Interpolation::kConstant, {{0.0, value}});
}

Profile Profile::interpolated(Interpolation kind, std::vector<Knot> knots) {
  if (knots.empty()) throw DomainError("profile needs at least one knot");
  for (const Knot& k : knots) {
    if (!std::isfinite(k.z) || !std::isfinite(k.value)) {
      throw DomainError("profile knot is not finite");
    }
  }
  if (kind == Interpolation::kConstant) {
    if (knots.size() != 1) throw DomainError("constant profile takes exactly one knot");
    return constant(knots.front().value);
  }
  if (knots.size() < 2) throw DomainError("interpolated profile needs at least two knots");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].z > knots[i - 1].z)) {
      throw DomainError("profile knots must have strictly increasing z");
    }
  }
  return Profile(kind, std::move(knots));
}

double Profile::operator()(double z) const {
  if (kind_ == Interpolation::kConstant) return knots_.front().value;
  if (z < knots_.front().z || z > knots_.back().z) {
    throw DomainError("profile evaluated at z = " + std::to_string(z) +
                      " outside its knots");
  }
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), z,
                             [](double v, const Knot& k) { return v < k.z; });
  if (hi == knots_.end()) return knots_.back().value;
  auto lo = hi - 1;
  const double s = (z - lo->z) / (hi->z - lo->z);
  const double w = kind_ == Interpolation::kLinear
                       ? s
                       : 0.5 * (1.0 - std::cos(std::numbers::pi * s));
  return lo->value + (hi->value - lo->value) * w;
}

bool Profile::covers(double lo, double hi) const {
  if (kind_ == Interpolation::kConstant) return true;
  return knots_.front().z <= lo && knots_.back().z >= hi;
}

std::pair<double, double> Profile::value_range() const {
  auto [mn, mx] = std::minmax_element(
      knots_.begin(), knots_.end(),
      [](const Knot& a, const Knot& b) { return a.value < b.value; });
  return {mn->value, mx->value};
}

}  // namespace topobs
