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

#include <stdexcept>
#include <string>

namespace topobs {

/// An argument lies outside the domain of an operation (bad bond index,
/// negative separation, coupling above the geometry amplitude, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A caller broke a documented precondition on an already-built value
/// (unnormalized state, asymmetric matrix, negative probability).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite or otherwise unusable numbers produced during a computation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical feature the computation relies on is absent, e.g. no mid-gap
/// boundary doublet exists for the requested device.
class NoBoundaryStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topobs
