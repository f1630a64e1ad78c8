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

// Propagation of the single-excitation Schroedinger equation
// i d(psi)/dz = H(z) psi along the device.

#include <Eigen/Core>
#include <string>
#include <vector>

#include "topobs/model.h"
#include "topobs/state.h"

namespace topobs {

struct TransferUnitary {
  Eigen::MatrixXcd matrix;
  double z0 = 0.0;
  double z1 = 0.0;
  int steps = 0;
};

/// ceil(40 * kappa_max * (z1 - z0)), with kappa_max sampled on 257 points.
int default_steps(const DeviceProfile& profile, double z0, double z1);

/// Ordered product of exp(-i H(z_mid) dz) over `steps` equal sub-intervals
/// (exponential midpoint rule, second order). Each factor is exact, so the
/// result is unitary to rounding for any step size. Throws DomainError
/// unless 0 <= z0 < z1 <= L and steps >= 1; NumericError (naming z) if a
/// coupling sample is not finite.
TransferUnitary propagate(const DeviceProfile& profile, double z0, double z1, int steps);

/// Whole device with default_steps.
TransferUnitary propagate(const DeviceProfile& profile);

/// max |(U^dagger U - I)_ij|
double unitarity_deviation(const Eigen::MatrixXcd& u);

/// max |U(steps) - U(2 steps)|_ij, the step-doubling convergence estimate.
double step_doubling_difference(const DeviceProfile& profile, double z0, double z1, int steps);

OutputDistribution single_photon_output(const TransferUnitary& u, const ModeState& input);

/// F = sum_i sqrt(p_i q_i).
double fidelity(const OutputDistribution& simulated, const OutputDistribution& measured);

/// Edge state of H(0) on the requested side: the even/odd members of the
/// boundary doublet combined into left- and right-localized vectors, with
/// right = mirror(left) for mirror-symmetric devices. Throws
/// NoBoundaryStateError when H(0) has no mid-gap doublet.
ModeState boundary_injection_state(const DeviceProfile& profile, Side side);

struct IntensityMap {
  std::vector<double> z_samples;
  /// Row r: site intensities at z_samples[r].
  Eigen::MatrixXd intensity;
};

/// |psi(z)|^2 on n_rows evenly spaced z in [0, L]; `steps` is the total
/// step budget (0 = default), split evenly between rows.
IntensityMap intensity_map(const DeviceProfile& profile, const ModeState& input, int n_rows,
                           int steps = 0);

struct LeakageTrace {
  std::vector<double> z_samples;
  std::vector<double> leakage;
  double max_leakage = 0.0;
  std::vector<std::string> warnings;
};

/// Propagates `input` and, at n_checkpoints evenly spaced z after the start,
/// measures 1 - |P_B psi|^2 where P_B projects on the boundary doublet of
/// H(0) followed along z by overlap tracking. Throws ContractViolation if
/// the input lies outside the doublet at z = 0 (to 1e-6).
LeakageTrace adiabaticity_leakage(const DeviceProfile& profile, const ModeState& input,
                                  int n_checkpoints, int steps = 0);

}  // namespace topobs
