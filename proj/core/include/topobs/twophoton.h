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

// Two-photon interference through a linear-optical transfer matrix:
// coincidence probabilities with partial distinguishability, a brute-force
// Fock-space oracle, grouped-detector statistics, HOM curves and counting
// noise.

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "topobs/evolve.h"
#include "topobs/state.h"

namespace topobs {

using PortPair = std::pair<int, int>;  // 0-based sites

/// P = x |U_ki U_lj + U_kj U_li|^2 + (1 - x)(|U_ki U_lj|^2 + |U_kj U_li|^2)
/// for photons entering sites i != j and leaving at sites k != l, where x
/// is the squared mode overlap. Throws DomainError on coinciding ports or
/// x outside [0, 1].
double two_photon_coincidence(const Eigen::MatrixXcd& u, PortPair in, PortPair out,
                              double overlap);

/// Same statistics for photons injected into two orthogonal spatial modes
/// `a` and `b` (e.g. the left and right boundary states): the columns U a
/// and U b replace U_.i and U_.j. Throws ContractViolation if a and b are
/// not orthogonal to 1e-8.
double two_photon_coincidence(const Eigen::MatrixXcd& u, const ModeState& a,
                              const ModeState& b, PortPair out, double overlap);

/// Output probabilities over unordered site pairs (k <= l) for
/// indistinguishable photons.
class FockTable {
 public:
  explicit FockTable(int n_sites) : n_(n_sites), p_(n_sites * (n_sites + 1) / 2, 0.0) {}

  int n_sites() const { return n_; }
  double at(int k, int l) const { return p_[index(k, l)]; }
  double& at(int k, int l) { return p_[index(k, l)]; }
  double total() const;
  /// Position of the pair (k, l) in the N(N+1)/2 symmetric basis.
  int index(int k, int l) const;

 private:
  int n_;
  std::vector<double> p_;
};

/// Two-excitation representation of U on the symmetric (bosonic) subspace,
/// built by expanding a_i^dag a_j^dag -> (sum_k U_ki a_k^dag)(sum_l U_lj
/// a_l^dag) in the normalized Fock basis |1_k 1_l>, |2_k>.
Eigen::MatrixXcd symmetric_two_photon_matrix(const Eigen::MatrixXcd& u);

/// Exact bosonic output statistics for one photon in each of sites i, j.
FockTable fock_oracle(const Eigen::MatrixXcd& u, PortPair in);

/// Same for one photon in each of two orthogonal modes a, b.
FockTable fock_oracle(const Eigen::MatrixXcd& u, const ModeState& a, const ModeState& b);

struct PortGroup {
  Side label;
  std::vector<int> sites;  // 0-based
};

/// Outer two waveguides on each side: {1, 2} and {N-1, N} in 1-based terms.
std::pair<PortGroup, PortGroup> outer_port_groups(int n_sites, int width = 2);

/// Throws DomainError for empty, out-of-range or overlapping groups.
void validate_groups(const std::pair<PortGroup, PortGroup>& groups, int n_sites);

/// Probability of one photon in the left group and one in the right group.
double grouped_coincidence(const Eigen::MatrixXcd& u, PortPair in,
                           const std::pair<PortGroup, PortGroup>& groups, double overlap);
double grouped_coincidence(const Eigen::MatrixXcd& u, const ModeState& a, const ModeState& b,
                           const std::pair<PortGroup, PortGroup>& groups, double overlap);

/// Fraction of the collected single-photon output that stays in the input's
/// own group, with probabilities restricted to the union of both groups.
/// The home group is the one carrying more of the input's weight. Throws
/// DomainError if the collected probability vanishes or the input weight is
/// split evenly.
double grouped_reflectivity(const TransferUnitary& u, const ModeState& input,
                            const std::pair<PortGroup, PortGroup>& groups);

/// x(tau) = x0 * exp(-tau^2 / (2 sigma^2)).
struct DistinguishabilityModel {
  double overlap_at_zero = 1.0;
  double coherence_width_ps = 1.0;

  void validate() const;
  double overlap(double delay_ps) const;
};

struct HomCurve {
  std::vector<double> delays_ps;
  std::vector<double> coincidence_probability;
  std::optional<std::vector<std::int64_t>> sampled_counts;
  std::optional<std::vector<double>> count_errors;
};

HomCurve hom_curve(const Eigen::MatrixXcd& u, const ModeState& a, const ModeState& b,
                   const std::pair<PortGroup, PortGroup>& groups,
                   const DistinguishabilityModel& model, const std::vector<double>& delays_ps);

struct VisibilityReport {
  double visibility = 0.0;
  double c_far = 0.0;
  double c_min = 0.0;
  int far_samples = 0;
  /// From sampled counts, when present.
  std::optional<double> count_visibility;
  std::optional<double> count_error;
};

/// V = (C_far - C_min) / C_far, C_far averaged over samples with
/// |tau| >= far_delay_ps. With counts, V is recomputed from them and given
/// a Poisson standard error. Throws DomainError if no far samples exist or
/// C_far is zero.
VisibilityReport visibility(const HomCurve& curve, double far_delay_ps);

struct Measured {
  double value;
  double error;
};

/// V_a / V_b with relative errors added linearly.
Measured relative_visibility(Measured numerator, Measured denominator);

/// Independent Poisson draws with mean flux * p for each probability;
/// deterministic for a fixed seed.
std::vector<std::int64_t> sample_counts(const std::vector<double>& probabilities, double flux,
                                        std::uint64_t seed);

/// Attaches counts and sqrt(n) errors to a curve.
void attach_counts(HomCurve& curve, double flux, std::uint64_t seed);

}  // namespace topobs
