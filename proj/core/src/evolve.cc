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

#include "topobs/evolve.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "topobs/error.h"
#include "topobs/spectral.h"

namespace topobs {

namespace {

using Complex = std::complex<double>;

Hamiltonian checked_hamiltonian(const DeviceProfile& profile, double z) {
  Hamiltonian h = hamiltonian_at(profile, z);
  if (!h.bonds().allFinite()) {
    std::ostringstream msg;
    msg << "non-finite coupling in Hamiltonian at z = " << z << " cm";
    throw NumericError(msg.str());
  }
  return h;
}

struct StepFactor {
  Eigen::MatrixXd vectors;
  Eigen::VectorXcd phases;

  StepFactor(const Hamiltonian& h, double dz) {
    const EigenSystem es = eigensystem(h);
    vectors = es.vectors;
    phases.resize(es.values.size());
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
      phases[i] = std::polar(1.0, -es.values[i] * dz);
    }
  }

  Eigen::MatrixXcd matrix() const {
    return vectors.cast<Complex>() * phases.asDiagonal() * vectors.transpose().cast<Complex>();
  }

  void apply(Eigen::VectorXcd& psi) const {
    Eigen::VectorXcd coeff = vectors.transpose().cast<Complex>() * psi;
    coeff.array() *= phases.array();
    psi = vectors.cast<Complex>() * coeff;
  }
};

void require_span(const DeviceProfile& profile, double z0, double z1, int steps) {
  if (!(z0 >= 0.0 && z0 < z1 && z1 <= profile.length())) {
    std::ostringstream msg;
    msg << "propagation span [" << z0 << ", " << z1 << "] must satisfy 0 <= z0 < z1 <= L = "
        << profile.length();
    throw DomainError(msg.str());
  }
  if (steps < 1) throw DomainError("propagation needs at least one step");
}

// Advances psi over [z0, z1] in `steps` midpoint steps.
void advance(const DeviceProfile& profile, double z0, double z1, int steps,
             Eigen::VectorXcd& psi) {
  const double dz = (z1 - z0) / steps;
  for (int k = 0; k < steps; ++k) {
    StepFactor(checked_hamiltonian(profile, z0 + (k + 0.5) * dz), dz).apply(psi);
  }
}

}  // namespace

int default_steps(const DeviceProfile& profile, double z0, double z1) {
  constexpr int kSamples = 257;
  double kappa_max = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const double z = z0 + (z1 - z0) * s / (kSamples - 1);
    kappa_max = std::max(kappa_max, profile.couplings(std::min(z, profile.length()))
                                        .cwiseAbs()
                                        .maxCoeff());
  }
  return std::max(1, static_cast<int>(std::ceil(40.0 * kappa_max * (z1 - z0))));
}

TransferUnitary propagate(const DeviceProfile& profile, double z0, double z1, int steps) {
  require_span(profile, z0, z1, steps);
  const int n = profile.n_sites();
  const double dz = (z1 - z0) / steps;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 0; k < steps; ++k) {
    u = StepFactor(checked_hamiltonian(profile, z0 + (k + 0.5) * dz), dz).matrix() * u;
  }
  return {std::move(u), z0, z1, steps};
}

TransferUnitary propagate(const DeviceProfile& profile) {
  return propagate(profile, 0.0, profile.length(),
                   default_steps(profile, 0.0, profile.length()));
}

double unitarity_deviation(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

double step_doubling_difference(const DeviceProfile& profile, double z0, double z1,
                                int steps) {
  const TransferUnitary coarse = propagate(profile, z0, z1, steps);
  const TransferUnitary fine = propagate(profile, z0, z1, 2 * steps);
  return (coarse.matrix - fine.matrix).cwiseAbs().maxCoeff();
}

OutputDistribution single_photon_output(const TransferUnitary& u, const ModeState& input) {
  if (u.matrix.cols() != input.n_sites()) {
    throw DomainError("state size does not match the transfer matrix");
  }
  const Eigen::VectorXcd out = u.matrix * input.amplitudes();
  std::vector<double> p(out.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    p[i] = std::norm(out[i]);
    sum += p[i];
  }
  // Renormalize away the rounding drift of a long product of exponentials.
  for (double& v : p) v /= sum;
  return OutputDistribution(std::move(p));
}

double fidelity(const OutputDistribution& simulated, const OutputDistribution& measured) {
  if (simulated.size() != measured.size()) {
    throw DomainError("fidelity needs distributions over the same number of sites");
  }
  double f = 0.0;
  for (int i = 0; i < simulated.size(); ++i) f += std::sqrt(simulated[i] * measured[i]);
  return std::min(f, 1.0);
}

ModeState boundary_injection_state(const DeviceProfile& profile, Side side) {
  const EigenSystem es = eigensystem(hamiltonian_at(profile, 0.0));
  const auto doublet = find_boundary_doublet(es);
  if (!doublet) {
    throw NoBoundaryStateError(
        "no mid-gap boundary doublet in H(0): the edge modes are not separated from the "
        "bulk (is Lambda(0) too small or phi badly chosen?)");
  }
  const Eigen::VectorXd a = es.vectors.col(doublet->lower);
  const Eigen::VectorXd b = es.vectors.col(doublet->upper);
  Eigen::VectorXd left = (a + b) / std::sqrt(2.0);
  Eigen::VectorXd right = (a - b) / std::sqrt(2.0);
  const int w = std::min(2, profile.n_sites() / 2);
  if (right.head(w).squaredNorm() > left.head(w).squaredNorm()) std::swap(left, right);
  const Eigen::Index peak = [&] {
    Eigen::Index i;
    left.cwiseAbs().maxCoeff(&i);
    return i;
  }();
  if (left[peak] < 0) left = -left;
  if (left.reverse().dot(right) < 0) right = -right;
  const Eigen::VectorXd& chosen = side == Side::kLeft ? left : right;
  return ModeState::normalized(chosen.cast<Complex>());
}

IntensityMap intensity_map(const DeviceProfile& profile, const ModeState& input, int n_rows,
                           int steps) {
  if (n_rows < 2) throw DomainError("intensity map needs at least two rows");
  if (input.n_sites() != profile.n_sites()) throw DomainError("state size mismatch");
  const double length = profile.length();
  if (steps <= 0) steps = default_steps(profile, 0.0, length);
  const int per_row = std::max(1, (steps + n_rows - 2) / (n_rows - 1));
  IntensityMap map;
  map.z_samples.resize(n_rows);
  map.intensity.resize(n_rows, profile.n_sites());
  Eigen::VectorXcd psi = input.amplitudes();
  double z_prev = 0.0;
  for (int r = 0; r < n_rows; ++r) {
    const double z = r == n_rows - 1 ? length : length * r / (n_rows - 1);
    if (r > 0) advance(profile, z_prev, z, per_row, psi);
    map.z_samples[r] = z;
    map.intensity.row(r) = psi.cwiseAbs2().transpose();
    z_prev = z;
  }
  return map;
}

LeakageTrace adiabaticity_leakage(const DeviceProfile& profile, const ModeState& input,
                                  int n_checkpoints, int steps) {
  if (n_checkpoints < 1) throw DomainError("need at least one checkpoint");
  if (input.n_sites() != profile.n_sites()) throw DomainError("state size mismatch");
  const double length = profile.length();
  if (steps <= 0) steps = default_steps(profile, 0.0, length);
  const int per_segment = std::max(1, (steps + n_checkpoints - 1) / n_checkpoints);

  EigenSystem es = eigensystem(hamiltonian_at(profile, 0.0));
  const auto doublet = find_boundary_doublet(es);
  if (!doublet) throw NoBoundaryStateError("no boundary doublet in H(0) to track");
  const int track_a = doublet->lower;
  const int track_b = doublet->upper;

  Eigen::VectorXcd psi = input.amplitudes();
  auto leakage_of = [&](const Eigen::MatrixXd& vectors) {
    const double kept = std::norm(vectors.col(track_a).cast<Complex>().dot(psi)) +
                        std::norm(vectors.col(track_b).cast<Complex>().dot(psi));
    return std::clamp(1.0 - kept, 0.0, 1.0);
  };
  if (leakage_of(es.vectors) > 1e-6) {
    throw ContractViolation("adiabaticity_leakage input is not a boundary-subspace state");
  }

  LeakageTrace trace;
  Eigen::MatrixXd tracked = es.vectors;
  Eigen::VectorXd tracked_values = es.values;
  double z_prev = 0.0;
  for (int c = 1; c <= n_checkpoints; ++c) {
    const double z = c == n_checkpoints ? length : length * c / n_checkpoints;
    advance(profile, z_prev, z, per_segment, psi);
    es = eigensystem(hamiltonian_at(profile, z));
    double weakest = 1.0;
    const std::vector<int> next = match_tracks(tracked, tracked_values, es, &weakest);
    if (weakest < 0.5) {
      std::ostringstream msg;
      msg << "ambiguous boundary tracking at z = " << z << " cm (overlap " << weakest << ")";
      trace.warnings.push_back(msg.str());
    }
    for (Eigen::Index t = 0; t < tracked.cols(); ++t) {
      tracked.col(t) = es.vectors.col(next[t]);
      tracked_values[t] = es.values[next[t]];
    }
    const double leak = leakage_of(tracked);
    trace.z_samples.push_back(z);
    trace.leakage.push_back(leak);
    trace.max_leakage = std::max(trace.max_leakage, leak);
    z_prev = z;
  }
  return trace;
}

}  // namespace topobs
