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

#include "topobs/twophoton.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.h"
#include "topobs/design.h"
#include "topobs/error.h"
#include "topobs/evolve.h"

namespace topobs {
namespace {

using Complex = std::complex<double>;

Eigen::MatrixXcd balanced_splitter() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd u(2, 2);
  u << s, Complex(0, s), Complex(0, s), s;
  return u;
}

std::pair<PortGroup, PortGroup> single_port_groups() {
  return {PortGroup{Side::kLeft, {0}}, PortGroup{Side::kRight, {1}}};
}

DeviceProfile beamsplitter(double c) {
  return template_device(DeviceKind::kBeamsplitter, 49.0, 2.0, defaults::kPhi, c);
}

/// Optimized template beamsplitter, computed once.
const DeviceProfile& optimized_device() {
  static const DeviceProfile d = beamsplitter(optimize_center_coupling(beamsplitter).parameter);
  return d;
}

const TransferUnitary& optimized_unitary() {
  static const TransferUnitary u = propagate(optimized_device());
  return u;
}

TEST(Coincidence, BalancedSplitter) {
  const Eigen::MatrixXcd u = balanced_splitter();
  EXPECT_NEAR(two_photon_coincidence(u, {0, 1}, {0, 1}, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(two_photon_coincidence(u, {0, 1}, {0, 1}, 0.0), 0.5, 1e-15);
}

TEST(Coincidence, HandComputedTwoModeCase) {
  const double t = 0.3;
  const Complex r(0.0, std::sqrt(1.0 - t * t));
  Eigen::MatrixXcd u(2, 2);
  u << t, r, r, t;
  // |t^2 + r^2|^2 and |t|^4 + |r|^4
  const double quantum = std::norm(t * t + r * r);
  const double classical = std::pow(t, 4) + std::pow(std::abs(r), 4);
  EXPECT_NEAR(two_photon_coincidence(u, {0, 1}, {0, 1}, 1.0), quantum, 1e-15);
  EXPECT_NEAR(two_photon_coincidence(u, {0, 1}, {0, 1}, 0.0), classical, 1e-15);
  EXPECT_NEAR(fock_oracle(u, {0, 1}).at(0, 1), quantum, 1e-15);
}

TEST(Coincidence, DomainErrors) {
  const Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(4, 4);
  EXPECT_THROW(two_photon_coincidence(u, {1, 1}, {0, 2}, 0.5), DomainError);
  EXPECT_THROW(two_photon_coincidence(u, {0, 1}, {2, 2}, 0.5), DomainError);
  EXPECT_THROW(two_photon_coincidence(u, {0, 1}, {0, 2}, 1.5), DomainError);
  EXPECT_THROW(two_photon_coincidence(u, {0, 5}, {0, 2}, 0.5), DomainError);
}

TEST(FockOracle, IdentityAndNormalization) {
  const FockTable t = fock_oracle(Eigen::MatrixXcd::Identity(5, 5), {0, 1});
  EXPECT_NEAR(t.at(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(t.total(), 1.0, 1e-15);
}

TEST(FockOracleProperty, EqualsFirstQuantizedPropagation) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const Eigen::MatrixXcd u = testing::haar_unitary(n, rng);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const auto ref = testing::first_quantized_two_photon(
            u, Eigen::VectorXcd::Unit(n, i), Eigen::VectorXcd::Unit(n, j));
        const FockTable table = fock_oracle(u, {i, j});
        for (const auto& [kl, p] : ref) EXPECT_NEAR(table.at(kl.first, kl.second), p, 1e-12);
        EXPECT_NEAR(table.total(), 1.0, 1e-12);
      }
    }
  }
}

TEST(FockOracle, SymmetricMatrixIsExponentialOfTwoExcitationHamiltonian) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> k(0.5, 3.0);
  Eigen::VectorXd bonds(4);
  for (auto& b : bonds) b = k(rng);
  const double length = 0.9;
  const Eigen::MatrixXd h = testing::dense_hamiltonian(bonds);
  const Eigen::MatrixXcd u = (Complex(0, -length) * h.cast<Complex>()).exp();
  const Eigen::MatrixXcd s = symmetric_two_photon_matrix(u);
  const Eigen::MatrixXcd expected =
      (Complex(0, -length) * testing::fock_hamiltonian(h).cast<Complex>()).exp();
  EXPECT_LE((s - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CoincidenceProperty, PermanentMatchesFockOracle) {
  std::mt19937_64 rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    const Eigen::MatrixXcd u = testing::haar_unitary(n, rng);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const FockTable table = fock_oracle(u, {i, j});
        for (int k = 0; k < n; ++k) {
          for (int l = k + 1; l < n; ++l) {
            worst = std::max(worst, std::abs(two_photon_coincidence(u, {i, j}, {k, l}, 1.0) -
                                             table.at(k, l)));
          }
          // Bunched outputs: |perm|^2 / 2 with perm = 2 U_ki U_kj.
          const double bunched = 2.0 * std::norm(u(k, i) * u(k, j));
          worst = std::max(worst, std::abs(bunched - table.at(k, k)));
        }
      }
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(CoincidenceProperty, ExchangeSymmetryAndTotalProbability) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xd(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 4;
    const Eigen::MatrixXcd u = testing::haar_unitary(n, rng);
    const double x = xd(rng);
    const int i = 0, j = n - 1;
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int l = k + 1; l < n; ++l) {
        const double p = two_photon_coincidence(u, {i, j}, {k, l}, x);
        EXPECT_NEAR(p, two_photon_coincidence(u, {j, i}, {k, l}, x), 1e-15);
        EXPECT_NEAR(p, two_photon_coincidence(u, {i, j}, {l, k}, x), 1e-15);
        EXPECT_GE(p, 0.0);
        total += p;
      }
      const double direct = std::norm(u(k, i) * u(k, j));
      total += x * 2.0 * direct + (1.0 - x) * direct;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Coincidence, ModeInputsMatchFirstQuantizedOracle) {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXcd u = testing::haar_unitary(6, rng);
  const Eigen::MatrixXcd basis = testing::haar_unitary(6, rng);
  const ModeState a(basis.col(0)), b(basis.col(1));
  const auto ref = testing::first_quantized_two_photon(u, a.amplitudes(), b.amplitudes());
  const FockTable table = fock_oracle(u, a, b);
  for (const auto& [kl, p] : ref) {
    EXPECT_NEAR(table.at(kl.first, kl.second), p, 1e-12);
    if (kl.first != kl.second) {
      EXPECT_NEAR(two_photon_coincidence(u, a, b, kl, 1.0), p, 1e-12);
    }
  }
  EXPECT_THROW(two_photon_coincidence(u, a, a, {0, 1}, 1.0), ContractViolation);
}

TEST(GroupedCoincidence, IdentityAndBunchedInputs) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(10, 10);
  const auto groups = outer_port_groups(10);
  EXPECT_NEAR(grouped_coincidence(id, {0, 8}, groups, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(grouped_coincidence(id, {0, 1}, groups, 1.0), 0.0, 1e-15);
}

TEST(GroupedCoincidence, OverlappingGroupsRejected) {
  const std::pair<PortGroup, PortGroup> bad{PortGroup{Side::kLeft, {0, 1}},
                                            PortGroup{Side::kRight, {1, 9}}};
  EXPECT_THROW(validate_groups(bad, 10), DomainError);
  EXPECT_THROW(grouped_coincidence(Eigen::MatrixXcd::Identity(10, 10), {0, 9}, bad, 1.0),
               DomainError);
  EXPECT_THROW(validate_groups({PortGroup{Side::kLeft, {}}, PortGroup{Side::kRight, {9}}}, 10),
               DomainError);
}

TEST(GroupedCoincidenceProperty, AffineAndNonIncreasingWhenQuantumBelowClassical) {
  std::mt19937_64 rng(13);
  const auto groups = outer_port_groups(6, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXcd u = testing::haar_unitary(6, rng);
    const double c0 = grouped_coincidence(u, {0, 5}, groups, 0.0);
    const double c1 = grouped_coincidence(u, {0, 5}, groups, 1.0);
    double previous = c0;
    for (int s = 1; s <= 10; ++s) {
      const double x = s / 10.0;
      const double c = grouped_coincidence(u, {0, 5}, groups, x);
      EXPECT_NEAR(c, (1 - x) * c0 + x * c1, 1e-14);
      if (c1 <= c0) { EXPECT_LE(c, previous + 1e-15); }
      previous = c;
    }
  }
}

TEST(GroupedReflectivity, IdentityKeepsPhotonHome) {
  TransferUnitary id{Eigen::MatrixXcd::Identity(10, 10), 0.0, 1.0, 1};
  EXPECT_EQ(grouped_reflectivity(id, ModeState::site(10, 0), outer_port_groups(10)), 1.0);
  EXPECT_THROW(grouped_reflectivity(id, ModeState::site(10, 4), outer_port_groups(10)),
               DomainError);
}

TEST(GroupedReflectivity, OptimizedDeviceIsBalancedAndMirrorSymmetric) {
  const TransferUnitary& u = optimized_unitary();
  const DeviceProfile& device = optimized_device();
  const auto groups = outer_port_groups(10);
  const double rl = grouped_reflectivity(u, boundary_injection_state(device, Side::kLeft), groups);
  const double rr = grouped_reflectivity(u, boundary_injection_state(device, Side::kRight), groups);
  EXPECT_GE(rl, 0.49);
  EXPECT_LE(rl, 0.51);
  EXPECT_NEAR(rl, rr, 1e-8);
}

TEST(GroupedCoincidence, OptimizedDeviceSuppressesCoincidences) {
  const TransferUnitary& u = optimized_unitary();
  const DeviceProfile& device = optimized_device();
  const ModeState a = boundary_injection_state(device, Side::kLeft);
  const ModeState b = boundary_injection_state(device, Side::kRight);
  const auto groups = outer_port_groups(10);
  const double quantum = grouped_coincidence(u.matrix, a, b, groups, 1.0);
  const double classical = grouped_coincidence(u.matrix, a, b, groups, 0.0);
  EXPECT_LT(quantum, 1e-3 * classical);

  // Cross-check the grouped sum against the Fock oracle.
  const FockTable table = fock_oracle(u.matrix, a, b);
  double expected = 0.0;
  for (int k : groups.first.sites)
    for (int l : groups.second.sites) expected += table.at(k, l);
  EXPECT_NEAR(quantum, expected, 1e-12);

  // Balanced-splitter relation V = 2 r t / (r^2 + t^2) on the collected ports.
  const double r = grouped_reflectivity(u, a, groups);
  const double v = (classical - quantum) / classical;
  EXPECT_NEAR(v, 2.0 * r * (1.0 - r) / (r * r + (1.0 - r) * (1.0 - r)), 1e-3);
}

TEST(HomCurve, FlatWithoutOverlapAndClassicalTails) {
  const TransferUnitary& u = optimized_unitary();
  const DeviceProfile& device = optimized_device();
  const ModeState a = boundary_injection_state(device, Side::kLeft);
  const ModeState b = boundary_injection_state(device, Side::kRight);
  const auto groups = outer_port_groups(10);
  const std::vector<double> delays{-50.0, -1.0, 0.0, 1.0, 50.0};
  const HomCurve flat = hom_curve(u.matrix, a, b, groups, {0.0, 1.0}, delays);
  for (double p : flat.coincidence_probability) {
    EXPECT_NEAR(p, flat.coincidence_probability.front(), 1e-15);
  }
  const HomCurve dip = hom_curve(u.matrix, a, b, groups, {1.0, 1.0}, delays);
  const double classical = grouped_coincidence(u.matrix, a, b, groups, 0.0);
  EXPECT_NEAR(dip.coincidence_probability.front(), classical, 1e-14);
  EXPECT_NEAR(dip.coincidence_probability.back(), classical, 1e-14);
  EXPECT_EQ(std::min_element(dip.coincidence_probability.begin(), dip.coincidence_probability.end()) -
                dip.coincidence_probability.begin(),
            2);
}

TEST(HomCurve, BalancedSplitterGaussianDip) {
  const Eigen::MatrixXcd u = balanced_splitter();
  const ModeState a = ModeState::site(2, 0), b = ModeState::site(2, 1);
  const double sigma = 0.7;
  std::vector<double> delays;
  for (int i = -40; i <= 40; ++i) delays.push_back(0.1 * i);
  const HomCurve curve = hom_curve(u, a, b, single_port_groups(), {1.0, sigma}, delays);
  for (std::size_t i = 0; i < delays.size(); ++i) {
    const double expected = 0.5 * (1.0 - std::exp(-delays[i] * delays[i] / (2 * sigma * sigma)));
    EXPECT_NEAR(curve.coincidence_probability[i], expected, 1e-15);
  }
  EXPECT_NEAR(visibility(curve, 3.9).visibility, 1.0, 1e-6);
}

TEST(Visibility, EqualsOverlapOnBalancedSplitter) {
  const Eigen::MatrixXcd u = balanced_splitter();
  const ModeState a = ModeState::site(2, 0), b = ModeState::site(2, 1);
  std::vector<double> delays;
  for (int i = -100; i <= 100; ++i) delays.push_back(0.1 * i);
  const HomCurve curve = hom_curve(u, a, b, single_port_groups(), {0.945, 1.0}, delays);
  EXPECT_NEAR(visibility(curve, 8.0).visibility, 0.945, 1e-12);
}

TEST(Visibility, Errors) {
  HomCurve zero{{-5, 0, 5}, {0, 0, 0}, std::nullopt, std::nullopt};
  EXPECT_THROW(visibility(zero, 4.0), DomainError);
  HomCurve near{{-1, 0, 1}, {0.5, 0.1, 0.5}, std::nullopt, std::nullopt};
  EXPECT_THROW(visibility(near, 4.0), DomainError);
}

TEST(Visibility, RelativeVisibilityPipeline) {
  const Measured rel = relative_visibility({0.931, 0.028}, {0.945, 0.005});
  EXPECT_NEAR(rel.value, 0.985, 5e-4);
  EXPECT_NEAR(rel.error, 0.035, 5e-4);
}

TEST(Visibility, CountErrorMatchesMonteCarloSpread) {
  const HomCurve base{{-10, -9, 0, 9, 10}, {0.5, 0.5, 0.03, 0.5, 0.5}, std::nullopt, std::nullopt};
  std::vector<double> values;
  double reported = 0.0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    HomCurve c = base;
    attach_counts(c, 2e4, seed);
    const VisibilityReport v = visibility(c, 8.0);
    values.push_back(*v.count_visibility);
    reported += *v.count_error;
  }
  reported /= values.size();
  double mean = 0.0, var = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  for (double v : values) var += (v - mean) * (v - mean);
  const double spread = std::sqrt(var / (values.size() - 1));
  EXPECT_NEAR(reported / spread, 1.0, 0.1);
  EXPECT_NEAR(mean, 0.94, 5 * spread / std::sqrt(values.size()) + 1e-4);
}

TEST(SampleCounts, ZeroMeanAndDeterminism) {
  const std::vector<double> p{0.0, 0.25, 0.5};
  const auto a = sample_counts(p, 1e3, 99);
  const auto b = sample_counts(p, 1e3, 99);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[0], 0);
  EXPECT_NE(sample_counts(p, 1e3, 100), a);
}

TEST(SampleCounts, LawOfLargeNumbers) {
  const std::vector<double> p{0.01, 0.2, 0.45};
  const double flux = 1e9;
  const auto n = sample_counts(p, flux, 5);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mean = flux * p[i];
    EXPECT_LE(std::abs(n[i] - mean), 5.0 * std::sqrt(mean));
  }
}

}  // namespace
}  // namespace topobs
