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

#include "topobs/design.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "topobs/error.h"
#include "topobs/evolve.h"
#include "topobs/spectral.h"
#include "topobs/twophoton.h"

namespace topobs {

namespace {

OptimizationResult refine(const std::function<double(double)>& f, double a, double fa,
                          double b, double fb, const RootOptions& options,
                          OptimizationResult result) {
  result.bracket_lo = a;
  result.bracket_hi = b;
  double width_before = 2.0 * (b - a);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (std::abs(fa) <= options.f_tolerance || std::abs(fb) <= options.f_tolerance ||
        b - a <= options.x_tolerance) {
      break;
    }
    const double width = b - a;
    double x = b - fb * (b - a) / (fb - fa);
    const bool stalled = width > 0.5 * width_before;
    if (!std::isfinite(x) || x <= a + 0.05 * width || x >= b - 0.05 * width || stalled) {
      x = 0.5 * (a + b);
      width_before = width;
    }
    const double fx = f(x);
    result.evaluations.emplace_back(x, fx);
    ++result.iterations;
    if ((fx < 0) == (fa < 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }
  const bool take_a = std::abs(fa) <= std::abs(fb);
  result.parameter = take_a ? a : b;
  result.objective = take_a ? fa : fb;
  result.bracket_lo = a;
  result.bracket_hi = b;
  return result;
}

}  // namespace

OptimizationResult find_root(const std::function<double(double)>& f, double lo, double hi,
                             const RootOptions& options) {
  if (!(lo < hi)) throw DomainError("root bracket must satisfy lo < hi");
  const double flo = f(lo);
  const double fhi = f(hi);
  OptimizationResult result;
  result.evaluations = {{lo, flo}, {hi, fhi}};
  result.iterations = 0;
  if (flo != 0.0 && fhi != 0.0 && (flo < 0) == (fhi < 0)) {
    throw OptimizationError("no sign change on the root bracket", result.evaluations);
  }
  result = refine(f, lo, flo, hi, fhi, options, std::move(result));
  result.converged = std::abs(result.objective) <= options.f_tolerance ||
                     result.bracket_hi - result.bracket_lo <= options.x_tolerance;
  return result;
}

double boundary_reflectivity(const DeviceProfile& profile, Side side, int steps) {
  const ModeState input = boundary_injection_state(profile, side);
  const double length = profile.length();
  const TransferUnitary u =
      propagate(profile, 0.0, length, steps > 0 ? steps : default_steps(profile, 0.0, length));
  return grouped_reflectivity(u, input, outer_port_groups(profile.n_sites()));
}

OptimizationResult optimize_center_coupling(
    const std::function<DeviceProfile(double center_coupling)>& make_device,
    const CenterCouplingOptions& options) {
  if (!(options.kappa0_per_cm > 0.0)) throw DomainError("kappa0 must be positive");
  const double target = options.target_reflectivity;
  std::vector<std::pair<double, double>> sweep;
  auto residual = [&](double c) {
    const double r = boundary_reflectivity(make_device(c), Side::kLeft, options.steps);
    sweep.emplace_back(c, r);
    return r - target;
  };

  const double c_max = options.max_fraction * options.kappa0_per_cm;
  double lo = options.start_fraction * options.kappa0_per_cm;
  double f_lo = residual(lo);
  if (f_lo <= 0.0) {
    throw OptimizationError("reflectivity is already below target at the smallest centre "
                            "coupling; lower start_fraction",
                            sweep);
  }
  double hi = lo;
  double f_hi = f_lo;
  while (f_hi > 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi = 2.0 * hi;
    if (hi > c_max) {
      std::ostringstream msg;
      msg << "no reflectivity crossing of " << target << " for centre coupling up to " << c_max
          << " 1/cm";
      throw OptimizationError(msg.str(), sweep);
    }
    f_hi = residual(hi);
  }

  OptimizationResult result;
  result.iterations = static_cast<int>(sweep.size());
  RootOptions root;
  root.x_tolerance = 1e-6 * options.kappa0_per_cm;
  root.f_tolerance = 1e-10;
  root.max_iterations = options.max_iterations;
  result = refine(residual, lo, f_lo, hi, f_hi, root, std::move(result));
  result.iterations = static_cast<int>(sweep.size());
  result.evaluations = sweep;
  result.converged = std::abs(result.objective) <= options.tolerance;
  if (!result.converged) {
    std::ostringstream msg;
    msg << "centre-coupling refinement ended with |r - target| = "
        << std::abs(result.objective) << " > " << options.tolerance;
    throw OptimizationError(msg.str(), sweep);
  }
  return result;
}

std::vector<double> phase_grid(int n) {
  if (n < 1) throw DomainError("phase grid needs at least one point");
  std::vector<double> grid(n);
  for (int k = 0; k < n; ++k) grid[k] = 2.0 * std::numbers::pi * k / n;
  return grid;
}

OptimizationResult select_phi(const std::function<DeviceProfile(double phi)>& make_device,
                              const std::vector<double>& candidates) {
  if (candidates.empty()) throw DomainError("select_phi needs candidate phases");
  OptimizationResult result;
  result.bracket_lo = *std::min_element(candidates.begin(), candidates.end());
  result.bracket_hi = *std::max_element(candidates.begin(), candidates.end());
  double best = -1.0;
  for (double phi : candidates) {
    const DeviceProfile device = make_device(phi);
    double localization = 0.0;
    try {
      localization = edge_localization(boundary_injection_state(device, Side::kLeft), 2);
    } catch (const NoBoundaryStateError&) {
      localization = -1.0;
    }
    result.evaluations.emplace_back(phi, localization);
    ++result.iterations;
    if (localization >= 0.0 && localization > best + 1e-12) {
      best = localization;
      result.parameter = phi;
    }
  }
  if (best < 0.0) {
    throw OptimizationError("no candidate phase produces a mid-gap boundary doublet",
                            result.evaluations);
  }
  const double two_pi = 2.0 * std::numbers::pi;
  result.parameter -= two_pi * std::floor(result.parameter / two_pi);
  if (result.parameter >= two_pi) result.parameter = 0.0;
  result.objective = best;
  result.converged = true;
  return result;
}

Layout export_layout(const DeviceProfile& profile, const GeometryMap& map, double pitch_cm,
                     double anchor_um) {
  map.validate();
  if (!(pitch_cm > 0.0) || !std::isfinite(pitch_cm)) {
    throw DomainError("layout pitch must be positive");
  }
  const double length = profile.length();
  Layout layout;
  for (int k = 0;; ++k) {
    const double z = k * pitch_cm;
    if (z >= length - 1e-12 * length) break;
    layout.z_samples.push_back(z);
  }
  layout.z_samples.push_back(length);

  const int n = profile.n_sites();
  layout.positions_um.resize(static_cast<Eigen::Index>(layout.z_samples.size()), n);
  for (std::size_t r = 0; r < layout.z_samples.size(); ++r) {
    const double z = layout.z_samples[r];
    const Eigen::VectorXd bonds = profile.couplings(z);
    Eigen::VectorXd x(n);
    x[0] = 0.0;
    for (int b = 0; b + 1 < n; ++b) {
      if (!(bonds[b] > 0.0) || bonds[b] > map.amplitude_a_per_cm) {
        std::ostringstream msg;
        msg << "bond " << b + 1 << " at z = " << z << " cm needs kappa = " << bonds[b]
            << " 1/cm, outside (0, a = " << map.amplitude_a_per_cm << "]";
        throw DomainError(msg.str());
      }
      x[b + 1] = x[b] + separation_for_coupling(map, bonds[b]);
    }
    const double shift = anchor_um - 0.5 * (x[0] + x[n - 1]);
    layout.positions_um.row(static_cast<Eigen::Index>(r)) = (x.array() + shift).transpose();
  }
  return layout;
}

Eigen::MatrixXd couplings_from_layout(const Layout& layout, const GeometryMap& map) {
  const Eigen::Index rows = layout.positions_um.rows();
  const Eigen::Index n = layout.positions_um.cols();
  Eigen::MatrixXd k(rows, n - 1);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index b = 0; b + 1 < n; ++b) {
      k(r, b) = coupling_for_separation(
          map, layout.positions_um(r, b + 1) - layout.positions_um(r, b));
    }
  }
  return k;
}

}  // namespace topobs
