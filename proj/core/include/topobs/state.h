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

#include <Eigen/Core>
#include <complex>
#include <vector>

namespace topobs {

enum class Side { kLeft, kRight };

/// Single-photon amplitudes over the N sites; unit norm.
class ModeState {
 public:
  static constexpr double kNormTolerance = 1e-10;

  /// Throws ContractViolation if | ||a||^2 - 1 | > tol.
  explicit ModeState(Eigen::VectorXcd amplitudes, double tol = kNormTolerance);

  /// Scales a non-zero vector to unit norm.
  static ModeState normalized(Eigen::VectorXcd amplitudes);
  /// All amplitude on `site` (0-based).
  static ModeState site(int n_sites, int site);

  int n_sites() const { return static_cast<int>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  ModeState mirrored() const;

 private:
  Eigen::VectorXcd amplitudes_;
};

/// Non-negative probabilities over sites summing to one.
class OutputDistribution {
 public:
  static constexpr double kSumTolerance = 1e-10;

  /// Throws ContractViolation on negative or non-finite entries or when the
  /// sum differs from 1 by more than `tol`.
  explicit OutputDistribution(std::vector<double> probabilities, double tol = kSumTolerance);

  const std::vector<double>& probabilities() const { return probabilities_; }
  int size() const { return static_cast<int>(probabilities_.size()); }
  double operator[](int i) const { return probabilities_[i]; }

 private:
  std::vector<double> probabilities_;
};

}  // namespace topobs
