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

#include "topobs/model.h"

#include <cmath>
#include <sstream>
#include <string>

#include "topobs/error.h"

namespace topobs {

namespace {

void require_z(double z, double length, const char* what) {
  if (!(z >= 0.0 && z <= length)) {
    std::ostringstream msg;
    msg << what << ": z = " << z << " cm outside [0, " << length << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace

HarperSchedule::HarperSchedule(int n_sites, double kappa0_per_cm, Rational b_bar,
                               Profile lambda, Profile phi, double length_cm)
    : n_sites_(n_sites),
      kappa0_(kappa0_per_cm),
      b_bar_(b_bar),
      lambda_(std::move(lambda)),
      phi_(std::move(phi)),
      length_(length_cm) {
  if (n_sites < 2) throw DomainError("n_sites must be at least 2");
  if (!(kappa0_ > 0.0) || !std::isfinite(kappa0_)) {
    throw DomainError("kappa0 must be positive and finite");
  }
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw DomainError("length must be positive and finite");
  }
  if (b_bar_.denominator <= 0) throw DomainError("b_bar denominator must be positive");
  if (!lambda_.covers(0.0, length_)) throw DomainError("lambda profile does not cover [0, L]");
  if (!phi_.covers(0.0, length_)) throw DomainError("phi profile does not cover [0, L]");
  auto [lo, hi] = lambda_.value_range();
  if (lo < 0.0 || hi >= 1.0) {
    throw DomainError("lambda must satisfy 0 <= Lambda < 1 on [0, L]");
  }
}

double coupling_at(const HarperSchedule& schedule, int bond, double z) {
  if (bond < 1 || bond > schedule.n_sites() - 1) {
    throw DomainError("coupling_at: bond index n = " + std::to_string(bond) +
                      " outside 1.." + std::to_string(schedule.n_sites() - 1));
  }
  require_z(z, schedule.length(), "coupling_at");
  const double arg =
      2.0 * std::numbers::pi * schedule.b_bar().value() * bond + schedule.phi()(z);
  return schedule.kappa0() * (1.0 + schedule.lambda()(z) * std::cos(arg));
}

Hamiltonian::Hamiltonian(Eigen::VectorXd bond_couplings) : bonds_(std::move(bond_couplings)) {
  if (bonds_.size() < 1) throw DomainError("Hamiltonian needs at least one bond");
}

Eigen::MatrixXd Hamiltonian::dense() const {
  const int n = n_sites();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    h(k, k + 1) = bonds_[k];
    h(k + 1, k) = bonds_[k];
  }
  return h;
}

bool Hamiltonian::is_palindromic(double rel_tol) const {
  const Eigen::Index m = bonds_.size();
  const double scale = bonds_.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < m / 2; ++k) {
    if (std::abs(bonds_[k] - bonds_[m - 1 - k]) > rel_tol * scale) return false;
  }
  return true;
}

double Hamiltonian::max_coupling() const { return bonds_.cwiseAbs().maxCoeff(); }

DeviceProfile::DeviceProfile(int n_sites, double length_cm, CouplingFn couplings)
    : n_sites_(n_sites), length_(length_cm), couplings_(std::move(couplings)) {
  if (n_sites < 2) throw DomainError("device needs at least 2 sites");
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw DomainError("device length must be positive and finite");
  }
  if (!couplings_) throw DomainError("device coupling function is empty");
}

DeviceProfile DeviceProfile::uniform(int n_sites, double kappa_per_cm, double length_cm) {
  if (!(kappa_per_cm > 0.0)) throw DomainError("uniform coupling must be positive");
  Eigen::VectorXd bonds = Eigen::VectorXd::Constant(n_sites - 1, kappa_per_cm);
  return frozen(std::move(bonds), length_cm);
}

DeviceProfile DeviceProfile::frozen(Eigen::VectorXd bonds, double length_cm) {
  const int n = static_cast<int>(bonds.size()) + 1;
  return DeviceProfile(n, length_cm, [bonds = std::move(bonds)](double) { return bonds; });
}

Eigen::VectorXd DeviceProfile::couplings(double z) const {
  require_z(z, length_, "device couplings");
  Eigen::VectorXd k = couplings_(z);
  if (k.size() != n_sites_ - 1) {
    throw NumericError("coupling function returned " + std::to_string(k.size()) +
                       " bonds for a " + std::to_string(n_sites_) + "-site device");
  }
  return k;
}

double DeviceProfile::center_coupling(double z) const {
  if (n_sites_ % 2 != 0) throw DomainError("centre coupling needs an even site count");
  return couplings(z)[n_sites_ / 2 - 1];
}

DeviceProfile harper_device(const HarperSchedule& schedule, Profile center_coupling) {
  const int n = schedule.n_sites();
  if (n % 2 != 0) throw DomainError("mirror-symmetric device needs an even site count");
  if (!center_coupling.covers(0.0, schedule.length())) {
    throw DomainError("centre coupling profile does not cover [0, L]");
  }
  if (center_coupling.value_range().first <= 0.0) {
    throw DomainError("centre coupling must be strictly positive");
  }
  const int half = n / 2;
  return DeviceProfile(
      n, schedule.length(),
      [schedule, center = std::move(center_coupling), half](double z) {
        Eigen::VectorXd bonds(2 * half - 1);
        for (int b = 1; b < half; ++b) {
          const double k = coupling_at(schedule, b, z);
          bonds[b - 1] = k;
          bonds[2 * half - 1 - b] = k;
        }
        bonds[half - 1] = center(z);
        return bonds;
      });
}

Hamiltonian hamiltonian_at(const DeviceProfile& profile, double z) {
  return Hamiltonian(profile.couplings(z));
}

Profile template_lambda_profile(DeviceKind kind, double length_cm) {
  if (kind == DeviceKind::kStationary) return Profile::constant(defaults::kLambdaEdge);
  return Profile::interpolated(Interpolation::kRaisedCosine,
                               {{0.0, defaults::kLambdaEdge},
                                {0.5 * length_cm, defaults::kLambdaCenter},
                                {length_cm, defaults::kLambdaEdge}});
}

HarperSchedule template_schedule(DeviceKind kind, double kappa0_per_cm, double length_cm,
                                 double phi) {
  if (!std::isfinite(phi)) throw DomainError("phi must be finite");
  return HarperSchedule(defaults::kSites, kappa0_per_cm, defaults::kBBar,
                        template_lambda_profile(kind, length_cm), Profile::constant(phi),
                        length_cm);
}

DeviceProfile template_device(DeviceKind kind, double kappa0_per_cm, double length_cm, double phi,
                              double center_coupling_per_cm) {
  if (!(center_coupling_per_cm > 0.0)) throw DomainError("centre coupling must be positive");
  return harper_device(template_schedule(kind, kappa0_per_cm, length_cm, phi),
                       Profile::constant(center_coupling_per_cm));
}

void GeometryMap::validate() const {
  if (!(amplitude_a_per_cm > 0.0) || !std::isfinite(amplitude_a_per_cm)) {
    throw DomainError("geometry amplitude a must be positive");
  }
  if (!(decay_b_per_um > 0.0) || !std::isfinite(decay_b_per_um)) {
    throw DomainError("geometry decay b must be positive");
  }
}

double coupling_for_separation(const GeometryMap& map, double separation_um) {
  map.validate();
  if (!(separation_um >= 0.0)) {
    throw DomainError("separation must be non-negative, got " + std::to_string(separation_um));
  }
  return map.amplitude_a_per_cm * std::exp(-map.decay_b_per_um * separation_um);
}

double separation_for_coupling(const GeometryMap& map, double kappa_per_cm) {
  map.validate();
  if (!(kappa_per_cm > 0.0) || kappa_per_cm > map.amplitude_a_per_cm) {
    std::ostringstream msg;
    msg << "kappa = " << kappa_per_cm << " 1/cm outside (0, a = " << map.amplitude_a_per_cm
        << "]";
    throw DomainError(msg.str());
  }
  return std::log(map.amplitude_a_per_cm / kappa_per_cm) / map.decay_b_per_um;
}

}  // namespace topobs
