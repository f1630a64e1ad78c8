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

// Shared fixtures and reference computations for the test suites. The
// references here are written independently of the library code paths
// they check: direct formula evaluation, Runge-Kutta integration, Pade
// matrix exponentials and first-quantized two-photon propagation.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "topobs/model.h"

namespace topobs::testing {

using Complex = std::complex<double>;

inline double harper_reference(double kappa0, double lambda, double b_bar, double phi, int n) {
  return kappa0 * (1.0 + lambda * std::cos(2.0 * std::numbers::pi * b_bar * n + phi));
}

/// Haar-distributed unitary from QR of a complex Ginibre matrix.
inline Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

inline Eigen::MatrixXd dense_hamiltonian(const Eigen::VectorXd& bonds) {
  const auto n = bonds.size() + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index b = 0; b < bonds.size(); ++b) h(b, b + 1) = h(b + 1, b) = bonds[b];
  return h;
}

/// Classical RK4 on dU/dz = -i H(z) U.
inline Eigen::MatrixXcd rk4_propagator(const DeviceProfile& profile, double z0, double z1,
                                       int steps) {
  const int n = profile.n_sites();
  const Complex mi(0.0, -1.0);
  auto rhs = [&](double z, const Eigen::MatrixXcd& u) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd h = dense_hamiltonian(profile.couplings(z)).cast<Complex>();
    return mi * h * u;
  };
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  const double dz = (z1 - z0) / steps;
  for (int s = 0; s < steps; ++s) {
    const double z = z0 + s * dz;
    const double zh = std::min(z + 0.5 * dz, z1);
    const double ze = std::min(z + dz, z1);
    const Eigen::MatrixXcd k1 = rhs(z, u);
    const Eigen::MatrixXcd k2 = rhs(zh, u + 0.5 * dz * k1);
    const Eigen::MatrixXcd k3 = rhs(zh, u + 0.5 * dz * k2);
    const Eigen::MatrixXcd k4 = rhs(ze, u + dz * k3);
    u += dz / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

/// Midpoint product with Pade-based exponentials.
inline Eigen::MatrixXcd expm_midpoint(const DeviceProfile& profile, double z0, double z1,
                                      int steps) {
  const int n = profile.n_sites();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  const double dz = (z1 - z0) / steps;
  for (int s = 0; s < steps; ++s) {
    const double zm = z0 + (s + 0.5) * dz;
    const Eigen::MatrixXcd gen =
        Complex(0.0, -dz) * dense_hamiltonian(profile.couplings(zm)).cast<Complex>();
    const Eigen::MatrixXcd step = gen.exp();
    u = step * u;
  }
  return u;
}

/// Smooth random device: bond b follows k_b + a_b sin(w_b z + p_b), all positive.
inline DeviceProfile random_smooth_profile(int n_sites, double length, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> base(20.0, 60.0);
  std::uniform_real_distribution<double> amp(1.0, 15.0);
  std::uniform_real_distribution<double> freq(0.5, 4.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const int bonds = n_sites - 1;
  std::vector<double> k(bonds), a(bonds), w(bonds), p(bonds);
  for (int b = 0; b < bonds; ++b) {
    k[b] = base(rng);
    a[b] = amp(rng);
    w[b] = freq(rng);
    p[b] = phase(rng);
  }
  return DeviceProfile(n_sites, length, [=](double z) {
    Eigen::VectorXd v(bonds);
    for (int b = 0; b < bonds; ++b) v[b] = k[b] + a[b] * std::sin(w[b] * z + p[b]);
    return v;
  });
}

/// Exact bosonic two-photon output probabilities from first-quantized
/// propagation: psi = S (e_i x e_j), psi' = (U x U) psi, P(k,l) summed over
/// both orderings for k != l.
inline std::map<std::pair<int, int>, double> first_quantized_two_photon(
    const Eigen::MatrixXcd& u, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const auto n = u.rows();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) psi[i * n + j] = a[i] * b[j] + a[j] * b[i];
  psi /= psi.norm();
  Eigen::MatrixXcd uu(n * n, n * n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) uu(k * n + l, i * n + j) = u(k, i) * u(l, j);
  const Eigen::VectorXcd out = uu * psi;
  std::map<std::pair<int, int>, double> p;
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      p[{k, l}] = k == l ? std::norm(out[k * n + k])
                         : std::norm(out[k * n + l]) + std::norm(out[l * n + k]);
    }
  }
  return p;
}

/// Two-excitation Hamiltonian sum_mn h_mn a_m^dag a_n on the normalized
/// Fock basis ordered (k, l), k <= l, row-major.
inline Eigen::MatrixXd fock_hamiltonian(const Eigen::MatrixXd& h) {
  const int n = static_cast<int>(h.rows());
  std::vector<std::pair<int, int>> basis;
  std::map<std::pair<int, int>, int> index;
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      index[{k, l}] = static_cast<int>(basis.size());
      basis.emplace_back(k, l);
    }
  const int dim = static_cast<int>(basis.size());
  Eigen::MatrixXd hf = Eigen::MatrixXd::Zero(dim, dim);
  for (int c = 0; c < dim; ++c) {
    std::vector<int> occ(n, 0);
    ++occ[basis[c].first];
    ++occ[basis[c].second];
    for (int m = 0; m < n; ++m) {
      for (int q = 0; q < n; ++q) {
        if (h(m, q) == 0.0 || occ[q] == 0) continue;
        std::vector<int> next = occ;
        double amp = std::sqrt(static_cast<double>(next[q]));
        --next[q];
        amp *= std::sqrt(static_cast<double>(next[m] + 1));
        ++next[m];
        int first = -1, second = -1;
        for (int s = 0; s < n; ++s) {
          for (int t = 0; t < next[s]; ++t) (first < 0 ? first : second) = s;
        }
        hf(index[{first, second}], c) += h(m, q) * amp;
      }
    }
  }
  return hf;
}

}  // namespace topobs::testing
