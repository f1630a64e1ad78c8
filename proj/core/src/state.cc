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

#include "topobs/state.h"

#include <cmath>
#include <sstream>

#include "topobs/error.h"

namespace topobs {

ModeState::ModeState(Eigen::VectorXcd amplitudes, double tol)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ContractViolation("mode state has no sites");
  const double norm2 = amplitudes_.squaredNorm();
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > tol) {
    std::ostringstream msg;
    msg << "mode state is not normalized: |psi|^2 = " << norm2;
    throw ContractViolation(msg.str());
  }
}

ModeState ModeState::normalized(Eigen::VectorXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ContractViolation("cannot normalize a zero or non-finite vector");
  }
  return ModeState(amplitudes / norm);
}

ModeState ModeState::site(int n_sites, int site) {
  if (site < 0 || site >= n_sites) throw DomainError("site index out of range");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(n_sites);
  a[site] = 1.0;
  return ModeState(std::move(a));
}

ModeState ModeState::mirrored() const {
  return ModeState(amplitudes_.reverse().eval());
}

OutputDistribution::OutputDistribution(std::vector<double> probabilities, double tol)
    : probabilities_(std::move(probabilities)) {
  if (probabilities_.empty()) throw ContractViolation("empty distribution");
  double sum = 0.0;
  for (std::size_t i = 0; i < probabilities_.size(); ++i) {
    const double p = probabilities_[i];
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream msg;
      msg << "probability at site " << i + 1 << " is negative or non-finite: " << p;
      throw ContractViolation(msg.str());
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "distribution is not normalized: sum = " << sum;
    throw ContractViolation(msg.str());
  }
}

}  // namespace topobs
