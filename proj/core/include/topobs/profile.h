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

#include <string_view>
#include <utility>
#include <vector>

namespace topobs {

enum class Interpolation {
  kConstant,
  kLinear,
  /// Half-cosine blend between knots; zero slope at every knot.
  kRaisedCosine,
};

std::string_view to_string(Interpolation kind);
Interpolation interpolation_from_string(std::string_view name);

/// A continuous scalar function of the propagation coordinate z (cm),
/// defined by knots and an interpolation rule.
class Profile {
 public:
  struct Knot {
    double z;
    double value;
  };

  static Profile constant(double value);
  /// Knots must have strictly increasing z. Throws DomainError otherwise.
  static Profile interpolated(Interpolation kind, std::vector<Knot> knots);

  double operator()(double z) const;

  Interpolation kind() const { return kind_; }
  const std::vector<Knot>& knots() const { return knots_; }

  /// True when the profile is defined on all of [lo, hi].
  bool covers(double lo, double hi) const;
  /// Extreme knot values. Both interpolation rules are monotone between
  /// knots, so these bound the profile everywhere.
  std::pair<double, double> value_range() const;

 private:
  Profile(Interpolation kind, std::vector<Knot> knots)
      : kind_(kind), knots_(std::move(knots)) {}

  Interpolation kind_;
  std::vector<Knot> knots_;
};

}  // namespace topobs
