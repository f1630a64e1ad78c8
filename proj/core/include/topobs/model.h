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

// Coupling law, device profiles and the tight-binding Hamiltonian of a 1D
// waveguide array. Units: couplings in 1/cm, z and lengths in cm,
// waveguide separations in um.

#include <Eigen/Core>
#include <functional>
#include <numbers>

#include "topobs/profile.h"

namespace topobs {

struct Rational {
  int numerator = 2;
  int denominator = 3;

  double value() const { return static_cast<double>(numerator) / denominator; }
};

/// kappa_n(z) = kappa0 * [1 + Lambda(z) * cos(2 pi b n + phi(z))] on a chain
/// of `n_sites` sites, z in [0, length].
class HarperSchedule {
 public:
  /// Throws DomainError unless kappa0 > 0, length > 0, n_sites >= 2,
  /// b_bar has a positive denominator, both profiles cover [0, length] and
  /// 0 <= Lambda < 1 everywhere on it.
  HarperSchedule(int n_sites, double kappa0_per_cm, Rational b_bar,
                 Profile lambda, Profile phi, double length_cm);

  int n_sites() const { return n_sites_; }
  double kappa0() const { return kappa0_; }
  Rational b_bar() const { return b_bar_; }
  const Profile& lambda() const { return lambda_; }
  const Profile& phi() const { return phi_; }
  double length() const { return length_; }

 private:
  int n_sites_;
  double kappa0_;
  Rational b_bar_;
  Profile lambda_;
  Profile phi_;
  double length_;
};

/// Coupling of bond `bond` (1-based, 1..N-1) at position z.
double coupling_at(const HarperSchedule& schedule, int bond, double z);

/// Nearest-neighbour single-excitation Hamiltonian. Only the N-1 bond
/// couplings are stored, so the matrix is symmetric, tridiagonal and has a
/// zero diagonal by construction.
class Hamiltonian {
 public:
  explicit Hamiltonian(Eigen::VectorXd bond_couplings);

  int n_sites() const { return static_cast<int>(bonds_.size()) + 1; }
  const Eigen::VectorXd& bonds() const { return bonds_; }
  Eigen::MatrixXd dense() const;
  /// Bond vector reads the same forwards and backwards, i.e. H commutes
  /// with the site-reversal permutation.
  bool is_palindromic(double rel_tol = 0.0) const;
  double max_coupling() const;

 private:
  Eigen::VectorXd bonds_;
};

/// A concrete N-site device: bond couplings as a function of z on [0, L].
class DeviceProfile {
 public:
  using CouplingFn = std::function<Eigen::VectorXd(double z)>;

  DeviceProfile(int n_sites, double length_cm, CouplingFn couplings);

  /// Uniform chain with all bonds equal to `kappa`.
  static DeviceProfile uniform(int n_sites, double kappa_per_cm, double length_cm);
  /// Fixed (z-independent) bond vector.
  static DeviceProfile frozen(Eigen::VectorXd bonds, double length_cm);

  int n_sites() const { return n_sites_; }
  double length() const { return length_; }

  /// Bond couplings at z. Throws DomainError for z outside [0, L].
  Eigen::VectorXd couplings(double z) const;
  /// The middle bond (index N/2, 1-based) for even N.
  double center_coupling(double z) const;

 private:
  int n_sites_;
  double length_;
  CouplingFn couplings_;
};

/// Mirror-symmetric device: bonds 1..N/2-1 follow the Harper law, bond N/2 is
/// the independent centre coupling c(z), bonds N/2+1..N-1 mirror the left
/// half. Requires even N and c(z) > 0 on [0, L].
DeviceProfile harper_device(const HarperSchedule& schedule, Profile center_coupling);

Hamiltonian hamiltonian_at(const DeviceProfile& profile, double z);

enum class DeviceKind { kStationary, kBeamsplitter };

namespace defaults {
inline constexpr int kSites = 10;
inline constexpr Rational kBBar{2, 3};
inline constexpr double kLambdaEdge = 0.6;
inline constexpr double kLambdaCenter = 0.1;
inline constexpr double kKappa0PerCm = 49.0;
inline constexpr double kLengthCm = 2.0;
/// Weakest second bond: cos(2 pi (2/3) 2 + phi) = -1, isolating the edge
/// dimer {1, 2}.
inline constexpr double kPhi = std::numbers::pi / 3.0;
/// Stationary device: weak centre link so the two edge states do not
/// tunnel into each other over the device length.
inline constexpr double kStationaryCenterPerCm = 0.5;
}  // namespace defaults

/// Lambda(z) for the two reference devices: constant 0.6, or a raised-cosine
/// dip 0.6 -> 0.1 (at L/2) -> 0.6.
Profile template_lambda_profile(DeviceKind kind, double length_cm);

HarperSchedule template_schedule(DeviceKind kind, double kappa0_per_cm, double length_cm,
                                 double phi);

/// Ten-site, b = 2/3 device with constant centre coupling.
DeviceProfile template_device(DeviceKind kind, double kappa0_per_cm, double length_cm, double phi,
                              double center_coupling_per_cm);

/// kappa(d) = a * exp(-b d), a in 1/cm and b in 1/um.
struct GeometryMap {
  double amplitude_a_per_cm = 115.0;
  double decay_b_per_um = 0.36;

  /// Throws DomainError unless both constants are positive and finite.
  void validate() const;
};

double coupling_for_separation(const GeometryMap& map, double separation_um);
double separation_for_coupling(const GeometryMap& map, double kappa_per_cm);

}  // namespace topobs
