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

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "topobs/error.h"

namespace topobs {

namespace {

using Complex = std::complex<double>;

void require_overlap(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("mode overlap must lie in [0, 1]");
}

void require_ports(PortPair p, int n, const char* what) {
  if (p.first < 0 || p.first >= n || p.second < 0 || p.second >= n) {
    throw DomainError(std::string(what) + " port index out of range");
  }
  if (p.first == p.second) {
    throw DomainError(std::string(what) + " ports must be distinct, both are site " +
                      std::to_string(p.first + 1));
  }
}

double coincidence_from_columns(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, int k,
                                int l, double x) {
  const Complex direct = a[k] * b[l];
  const Complex exchange = a[l] * b[k];
  return x * std::norm(direct + exchange) +
         (1.0 - x) * (std::norm(direct) + std::norm(exchange));
}

void require_orthogonal(const ModeState& a, const ModeState& b) {
  if (a.n_sites() != b.n_sites()) throw DomainError("input modes differ in size");
  if (std::abs(a.amplitudes().dot(b.amplitudes())) > 1e-8) {
    throw ContractViolation("two-photon input modes must be orthogonal");
  }
}

}  // namespace

double two_photon_coincidence(const Eigen::MatrixXcd& u, PortPair in, PortPair out,
                              double overlap) {
  const int n = static_cast<int>(u.rows());
  require_ports(in, static_cast<int>(u.cols()), "input");
  require_ports(out, n, "output");
  require_overlap(overlap);
  return coincidence_from_columns(u.col(in.first), u.col(in.second), out.first, out.second,
                                  overlap);
}

double two_photon_coincidence(const Eigen::MatrixXcd& u, const ModeState& a,
                              const ModeState& b, PortPair out, double overlap) {
  require_orthogonal(a, b);
  require_ports(out, static_cast<int>(u.rows()), "output");
  require_overlap(overlap);
  return coincidence_from_columns(u * a.amplitudes(), u * b.amplitudes(), out.first,
                                  out.second, overlap);
}

double FockTable::total() const {
  double s = 0.0;
  for (double v : p_) s += v;
  return s;
}

int FockTable::index(int k, int l) const {
  if (k > l) std::swap(k, l);
  if (k < 0 || l >= n_) throw DomainError("Fock pair index out of range");
  return k * n_ - k * (k - 1) / 2 + (l - k);
}

Eigen::MatrixXcd symmetric_two_photon_matrix(const Eigen::MatrixXcd& u) {
  const int n = static_cast<int>(u.rows());
  const FockTable basis(n);
  const int dim = n * (n + 1) / 2;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
  const double root2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int col = basis.index(i, j);
      // a_i^dag a_j^dag |0> -> sum_{k,l} U_ki U_lj a_k^dag a_l^dag |0>
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          s(basis.index(k, l), col) += u(k, i) * u(l, j);
        }
      }
      // Normalize: (a_k^dag)^2 |0> = sqrt(2) |2_k>; input |2_i> carries 1/sqrt(2).
      for (int k = 0; k < n; ++k) s(basis.index(k, k), col) *= root2;
      if (i == j) s.col(col) /= root2;
    }
  }
  return s;
}

FockTable fock_oracle(const Eigen::MatrixXcd& u, PortPair in) {
  const int n = static_cast<int>(u.rows());
  if (in.first < 0 || in.first >= n || in.second < 0 || in.second >= n) {
    throw DomainError("input port index out of range");
  }
  const Eigen::MatrixXcd s = symmetric_two_photon_matrix(u);
  FockTable table(n);
  const Eigen::VectorXcd out = s.col(table.index(in.first, in.second));
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) table.at(k, l) = std::norm(out[table.index(k, l)]);
  }
  return table;
}

FockTable fock_oracle(const Eigen::MatrixXcd& u, const ModeState& a, const ModeState& b) {
  require_orthogonal(a, b);
  const int n = static_cast<int>(u.rows());
  FockTable table(n);
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(n * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      in[table.index(i, j)] += a.amplitudes()[i] * b.amplitudes()[j];
    }
  }
  for (int k = 0; k < n; ++k) in[table.index(k, k)] *= std::sqrt(2.0);
  in /= in.norm();
  const Eigen::VectorXcd out = symmetric_two_photon_matrix(u) * in;
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) table.at(k, l) = std::norm(out[table.index(k, l)]);
  }
  return table;
}

std::pair<PortGroup, PortGroup> outer_port_groups(int n_sites, int width) {
  if (width < 1 || 2 * width > n_sites) throw DomainError("port group width out of range");
  PortGroup left{Side::kLeft, {}};
  PortGroup right{Side::kRight, {}};
  for (int i = 0; i < width; ++i) {
    left.sites.push_back(i);
    right.sites.push_back(n_sites - width + i);
  }
  return {left, right};
}

void validate_groups(const std::pair<PortGroup, PortGroup>& groups, int n_sites) {
  const auto& [left, right] = groups;
  if (left.sites.empty() || right.sites.empty()) throw DomainError("port group is empty");
  for (const PortGroup* g : {&left, &right}) {
    for (int s : g->sites) {
      if (s < 0 || s >= n_sites) {
        throw DomainError("port group site " + std::to_string(s + 1) + " out of range");
      }
    }
  }
  for (int s : left.sites) {
    if (std::find(right.sites.begin(), right.sites.end(), s) != right.sites.end()) {
      throw DomainError("port groups overlap at site " + std::to_string(s + 1));
    }
  }
}

double grouped_coincidence(const Eigen::MatrixXcd& u, PortPair in,
                           const std::pair<PortGroup, PortGroup>& groups, double overlap) {
  validate_groups(groups, static_cast<int>(u.rows()));
  double p = 0.0;
  for (int k : groups.first.sites) {
    for (int l : groups.second.sites) p += two_photon_coincidence(u, in, {k, l}, overlap);
  }
  return p;
}

double grouped_coincidence(const Eigen::MatrixXcd& u, const ModeState& a, const ModeState& b,
                           const std::pair<PortGroup, PortGroup>& groups, double overlap) {
  validate_groups(groups, static_cast<int>(u.rows()));
  require_orthogonal(a, b);
  require_overlap(overlap);
  const Eigen::VectorXcd ua = u * a.amplitudes();
  const Eigen::VectorXcd ub = u * b.amplitudes();
  double p = 0.0;
  for (int k : groups.first.sites) {
    for (int l : groups.second.sites) p += coincidence_from_columns(ua, ub, k, l, overlap);
  }
  return p;
}

double grouped_reflectivity(const TransferUnitary& u, const ModeState& input,
                            const std::pair<PortGroup, PortGroup>& groups) {
  validate_groups(groups, input.n_sites());
  auto weight = [](const std::vector<int>& sites, auto&& value) {
    double w = 0.0;
    for (int s : sites) w += value(s);
    return w;
  };
  auto input_weight = [&](int s) { return std::norm(input.amplitudes()[s]); };
  const double in_left = weight(groups.first.sites, input_weight);
  const double in_right = weight(groups.second.sites, input_weight);
  if (std::abs(in_left - in_right) <= 1e-12) {
    throw DomainError("input weight is split evenly between the port groups");
  }
  const OutputDistribution out = single_photon_output(u, input);
  auto output_weight = [&](int s) { return out[s]; };
  const double out_left = weight(groups.first.sites, output_weight);
  const double out_right = weight(groups.second.sites, output_weight);
  const double collected = out_left + out_right;
  if (!(collected > 1e-15)) {
    throw DomainError("no probability reaches the collected ports");
  }
  return (in_left > in_right ? out_left : out_right) / collected;
}

void DistinguishabilityModel::validate() const {
  if (!(overlap_at_zero >= 0.0 && overlap_at_zero <= 1.0)) {
    throw DomainError("overlap_at_zero must lie in [0, 1]");
  }
  if (!(coherence_width_ps > 0.0) || !std::isfinite(coherence_width_ps)) {
    throw DomainError("coherence width must be positive");
  }
}

double DistinguishabilityModel::overlap(double delay_ps) const {
  const double s = delay_ps / coherence_width_ps;
  return overlap_at_zero * std::exp(-0.5 * s * s);
}

HomCurve hom_curve(const Eigen::MatrixXcd& u, const ModeState& a, const ModeState& b,
                   const std::pair<PortGroup, PortGroup>& groups,
                   const DistinguishabilityModel& model, const std::vector<double>& delays_ps) {
  model.validate();
  // The coincidence rate is affine in the overlap.
  const double quantum = grouped_coincidence(u, a, b, groups, 1.0);
  const double classical = grouped_coincidence(u, a, b, groups, 0.0);
  HomCurve curve;
  curve.delays_ps = delays_ps;
  curve.coincidence_probability.reserve(delays_ps.size());
  for (double tau : delays_ps) {
    if (!std::isfinite(tau)) throw DomainError("HOM delay is not finite");
    const double x = model.overlap(tau);
    curve.coincidence_probability.push_back(x * quantum + (1.0 - x) * classical);
  }
  return curve;
}

VisibilityReport visibility(const HomCurve& curve, double far_delay_ps) {
  const auto& p = curve.coincidence_probability;
  if (p.empty() || p.size() != curve.delays_ps.size()) {
    throw DomainError("HOM curve is empty or inconsistent");
  }
  VisibilityReport report;
  double far_sum = 0.0;
  std::int64_t far_counts = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(curve.delays_ps[i]) >= far_delay_ps) {
      far_sum += p[i];
      if (curve.sampled_counts) far_counts += (*curve.sampled_counts)[i];
      ++report.far_samples;
    }
  }
  if (report.far_samples == 0) {
    throw DomainError("HOM curve has no samples with |delay| >= far_delay");
  }
  report.c_far = far_sum / report.far_samples;
  const auto min_it = std::min_element(p.begin(), p.end());
  report.c_min = *min_it;
  if (!(report.c_far > 0.0)) throw DomainError("asymptotic coincidence level is zero");
  report.visibility = (report.c_far - report.c_min) / report.c_far;

  if (curve.sampled_counts) {
    const double far_mean = static_cast<double>(far_counts) / report.far_samples;
    if (!(far_mean > 0.0)) throw DomainError("asymptotic coincidence count is zero");
    const double dip = static_cast<double>((*curve.sampled_counts)[min_it - p.begin()]);
    report.count_visibility = 1.0 - dip / far_mean;
    // V = 1 - n0 / F, F the mean of m Poisson samples.
    const double m = report.far_samples;
    report.count_error = std::sqrt(dip / (far_mean * far_mean) +
                                   dip * dip / (m * far_mean * far_mean * far_mean));
  }
  return report;
}

Measured relative_visibility(Measured numerator, Measured denominator) {
  if (!(denominator.value > 0.0)) throw DomainError("reference visibility must be positive");
  const double ratio = numerator.value / denominator.value;
  const double rel = std::abs(numerator.error / numerator.value) +
                     std::abs(denominator.error / denominator.value);
  return {ratio, std::abs(ratio) * rel};
}

std::vector<std::int64_t> sample_counts(const std::vector<double>& probabilities, double flux,
                                        std::uint64_t seed) {
  if (!(flux > 0.0) || !std::isfinite(flux)) throw DomainError("flux must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> counts;
  counts.reserve(probabilities.size());
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw DomainError("negative probability in count sampling");
    const double mean = flux * p;
    if (mean == 0.0) {
      counts.push_back(0);
      continue;
    }
    std::poisson_distribution<std::int64_t> draw(mean);
    counts.push_back(draw(rng));
  }
  return counts;
}

void attach_counts(HomCurve& curve, double flux, std::uint64_t seed) {
  curve.sampled_counts = sample_counts(curve.coincidence_probability, flux, seed);
  std::vector<double> errors;
  errors.reserve(curve.sampled_counts->size());
  for (std::int64_t n : *curve.sampled_counts) errors.push_back(std::sqrt(static_cast<double>(n)));
  curve.count_errors = std::move(errors);
}

}  // namespace topobs
