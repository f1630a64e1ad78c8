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

// Device design: centre-coupling optimization for a 50:50 boundary-state
// beamsplitter, phase selection for edge confinement, and export of
// waveguide positions.

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "topobs/model.h"
#include "topobs/state.h"

namespace topobs {

struct OptimizationResult {
  double parameter = 0.0;
  /// Residual of the final iterate (or the maximized objective for scans).
  double objective = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool converged = false;
  /// Every (parameter, value) pair evaluated, in evaluation order.
  std::vector<std::pair<double, double>> evaluations;
};

/// The optimizer could not bracket or reach its target. Carries the
/// evaluated (parameter, value) sweep for diagnostics.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, std::vector<std::pair<double, double>> sweep)
      : std::runtime_error(what), sweep_(std::move(sweep)) {}

  const std::vector<std::pair<double, double>>& sweep() const { return sweep_; }

 private:
  std::vector<std::pair<double, double>> sweep_;
};

struct RootOptions {
  double x_tolerance = 1e-9;
  double f_tolerance = 1e-12;
  int max_iterations = 200;
};

/// Bracketed bisection with secant steps. Requires f(lo) and f(hi) of
/// opposite sign (or one of them zero); stops when the bracket is narrower
/// than x_tolerance or |f| <= f_tolerance, returning the better endpoint.
/// Throws OptimizationError without a sign change.
OptimizationResult find_root(const std::function<double(double)>& f, double lo, double hi,
                             const RootOptions& options = {});

/// Grouped reflectivity of the boundary state injected on `side`, collected
/// on the outer two waveguides of each edge.
double boundary_reflectivity(const DeviceProfile& profile, Side side, int steps = 0);

struct CenterCouplingOptions {
  double kappa0_per_cm = defaults::kKappa0PerCm;
  double target_reflectivity = 0.5;
  /// Acceptance band on |r - target|.
  double tolerance = 5e-3;
  /// Search starts at start_fraction * kappa0 and doubles up to max_fraction * kappa0.
  double start_fraction = 1e-3;
  double max_fraction = 2.0;
  int max_iterations = 200;
  int steps = 0;
};

/// Finds the smallest centre coupling c at which the left boundary state
/// splits target_reflectivity : 1 - target_reflectivity. r(c) starts at 1
/// for a decoupled centre; doubling c from a small start lands on the first
/// crossing, which is then refined to |dc| < 1e-6 kappa0. Throws
/// OptimizationError (with the sweep) when no crossing is found below the
/// maximum or the refined residual exceeds the tolerance.
OptimizationResult optimize_center_coupling(
    const std::function<DeviceProfile(double center_coupling)>& make_device,
    const CenterCouplingOptions& options = {});

/// n evenly spaced phases k * 2 pi / n.
std::vector<double> phase_grid(int n);

/// Grid scan for the phase maximizing the left-edge localization (two
/// sites) of the boundary injection state at z = 0. First maximizer wins
/// ties; the result is reduced to [0, 2 pi). Throws OptimizationError when
/// no candidate has a mid-gap doublet.
OptimizationResult select_phi(const std::function<DeviceProfile(double phi)>& make_device,
                              const std::vector<double>& candidates);

struct Layout {
  std::vector<double> z_samples;
  /// Row per z sample, column per waveguide: transverse centre in um.
  Eigen::MatrixXd positions_um;
};

/// Separations d_n(z) = separation_for_coupling(kappa_n(z)) accumulated into
/// positions centred on `anchor_um`. z runs from 0 in steps of `pitch_cm`,
/// always ending at L. Throws DomainError naming the bond and z when a
/// coupling exceeds the geometry amplitude.
Layout export_layout(const DeviceProfile& profile, const GeometryMap& map, double pitch_cm,
                     double anchor_um = 0.0);

/// Bond couplings recovered from adjacent position differences; row per z.
Eigen::MatrixXd couplings_from_layout(const Layout& layout, const GeometryMap& map);

}  // namespace topobs
