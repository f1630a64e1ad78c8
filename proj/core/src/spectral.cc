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

#include "topobs/spectral.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "topobs/error.h"

namespace topobs {

namespace {

// Columns spanning the even and odd subspaces of site reversal.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> parity_bases(Eigen::Index n) {
  const Eigen::Index half = n / 2;
  Eigen::MatrixXd even = Eigen::MatrixXd::Zero(n, n - half);
  Eigen::MatrixXd odd = Eigen::MatrixXd::Zero(n, half);
  const double r = std::sqrt(0.5);
  for (Eigen::Index i = 0; i < half; ++i) {
    even(i, i) = even(n - 1 - i, i) = r;
    odd(i, i) = r;
    odd(n - 1 - i, i) = -r;
  }
  if (n % 2 == 1) even(half, half) = 1.0;
  return {even, odd};
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_block(const Eigen::MatrixXd& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (block.rows() > 0) solver.compute(block);
  if (block.rows() > 0 && solver.info() != Eigen::Success) {
    throw NumericError("eigensolver did not converge");
  }
  return solver;
}

// Diagonalizes a reversal-symmetric matrix in the even and odd sectors
// separately, so every eigenvector has exact mirror parity even when the two
// sectors are nearly degenerate. Ties list the even vector first.
EigenSystem mirror_eigensystem(const Eigen::MatrixXd& h) {
  const Eigen::Index n = h.rows();
  const auto [pe, po] = parity_bases(n);
  const auto se = solve_block(pe.transpose() * h * pe);
  const auto so = solve_block(po.transpose() * h * po);
  EigenSystem es{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  Eigen::Index a = 0, b = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const bool take_even =
        b == po.cols() || (a < pe.cols() && se.eigenvalues()[a] <= so.eigenvalues()[b]);
    if (take_even) {
      es.values[k] = se.eigenvalues()[a];
      es.vectors.col(k) = pe * se.eigenvectors().col(a++);
    } else {
      es.values[k] = so.eigenvalues()[b];
      es.vectors.col(k) = po * so.eigenvectors().col(b++);
    }
  }
  return es;
}

void fix_signs(EigenSystem& es) {
  for (Eigen::Index c = 0; c < es.vectors.cols(); ++c) {
    auto col = es.vectors.col(c);
    const double peak = col.cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (std::abs(col[r]) >= 0.5 * peak) {
        if (col[r] < 0) col *= -1.0;
        break;
      }
    }
  }
}

bool commutes_with_reversal(const Eigen::MatrixXd& h) {
  const Eigen::MatrixXd r = h.reverse();
  return (h - r).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, h.cwiseAbs().maxCoeff());
}

EigenSystem finish(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& solver) {
  if (solver.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  fix_signs(es);
  return es;
}

EigenSystem finish(EigenSystem es) {
  fix_signs(es);
  return es;
}

}  // namespace

EigenSystem eigensystem(const Hamiltonian& h) {
  if (!h.bonds().allFinite()) throw NumericError("Hamiltonian has non-finite couplings");
  const int n = h.n_sites();
  if (h.is_palindromic()) return finish(mirror_eigensystem(h.dense()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(Eigen::VectorXd::Zero(n), h.bonds(), Eigen::ComputeEigenvectors);
  return finish(solver);
}

EigenSystem eigensystem(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw ContractViolation("matrix is not square");
  if (!h.allFinite()) throw NumericError("matrix has non-finite entries");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ContractViolation("eigensystem requires a symmetric matrix");
  }
  if (commutes_with_reversal(h)) return finish(mirror_eigensystem(h));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  return finish(solver);
}

double edge_localization(const ModeState& state, int edge_width, Side side) {
  const int n = state.n_sites();
  if (edge_width < 1 || 2 * edge_width > n) {
    throw ContractViolation("edge_width must lie in 1..N/2");
  }
  const Eigen::VectorXcd& a = state.amplitudes();
  if (std::abs(a.squaredNorm() - 1.0) > 1e-8) {
    throw ContractViolation("edge_localization needs a normalized state");
  }
  return side == Side::kLeft ? a.head(edge_width).squaredNorm()
                             : a.tail(edge_width).squaredNorm();
}

double two_sided_edge_weight(const Eigen::VectorXd& v, int edge_width) {
  if (edge_width < 1 || 2 * edge_width > v.size()) {
    throw ContractViolation("edge_width must lie in 1..N/2");
  }
  return v.head(edge_width).squaredNorm() + v.tail(edge_width).squaredNorm();
}

std::vector<Doublet> find_midgap_doublets(const EigenSystem& es, int edge_width) {
  std::vector<Doublet> found;
  const int n = static_cast<int>(es.values.size());
  if (n < 2 * edge_width + 2) return found;
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < n; ++i) {
    if (two_sided_edge_weight(es.vectors.col(i), edge_width) <= 0.5 ||
        two_sided_edge_weight(es.vectors.col(i + 1), edge_width) <= 0.5) {
      continue;
    }
    const double splitting = es.values[i + 1] - es.values[i];
    const double below = i > 0 ? es.values[i] - es.values[i - 1] : inf;
    const double above = i + 2 < n ? es.values[i + 2] - es.values[i + 1] : inf;
    if (std::min(below, above) > 2.0 * splitting) {
      found.push_back({i, i + 1});
      ++i;
    }
  }
  return found;
}

std::optional<Doublet> find_boundary_doublet(const EigenSystem& es, int edge_width) {
  auto all = find_midgap_doublets(es, edge_width);
  if (all.empty()) return std::nullopt;
  return all.back();
}

double gap_at(const EigenSystem& es, std::span<const int> boundary_indices) {
  if (boundary_indices.empty()) return 0.0;
  const int n = static_cast<int>(es.values.size());
  double gap = std::numeric_limits<double>::infinity();
  for (int b : boundary_indices) {
    if (b < 0 || b >= n) throw DomainError("boundary index out of range");
    for (int j = 0; j < n; ++j) {
      if (std::find(boundary_indices.begin(), boundary_indices.end(), j) !=
          boundary_indices.end()) {
        continue;
      }
      gap = std::min(gap, std::abs(es.values[b] - es.values[j]));
    }
  }
  return std::isfinite(gap) ? gap : 0.0;
}

std::vector<int> match_tracks(const Eigen::MatrixXd& previous,
                              const Eigen::VectorXd& previous_values,
                              const EigenSystem& next, double* min_overlap) {
  const Eigen::Index tracks = previous.cols();
  const Eigen::Index n = next.vectors.cols();
  const Eigen::MatrixXd overlap = (previous.transpose() * next.vectors).cwiseAbs();
  std::vector<int> assignment(tracks, -1);
  std::vector<bool> taken(n, false);
  double weakest = 1.0;
  for (Eigen::Index round = 0; round < tracks; ++round) {
    Eigen::Index best_t = -1, best_j = -1;
    double best = -1.0, best_dist = 0.0;
    for (Eigen::Index t = 0; t < tracks; ++t) {
      if (assignment[t] >= 0) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (taken[j]) continue;
        const double o = overlap(t, j);
        const double dist = std::abs(next.values[j] - previous_values[t]);
        if (o > best + 1e-9 || (std::abs(o - best) <= 1e-9 && dist < best_dist)) {
          best = o;
          best_dist = dist;
          best_t = t;
          best_j = j;
        }
      }
    }
    assignment[best_t] = static_cast<int>(best_j);
    taken[best_j] = true;
    weakest = std::min(weakest, best);
  }
  if (min_overlap) *min_overlap = weakest;
  return assignment;
}

BandTrace band_trace(const DeviceProfile& profile, int n_samples) {
  if (n_samples < 2) throw DomainError("band_trace needs n_samples >= 2");
  const int n = profile.n_sites();
  BandTrace trace;
  trace.tracks.resize(n_samples, n);
  trace.z_samples.resize(n_samples);

  Eigen::MatrixXd prev_vectors;
  Eigen::VectorXd prev_values;
  for (int s = 0; s < n_samples; ++s) {
    const double z = s == n_samples - 1 ? profile.length()
                                        : profile.length() * s / (n_samples - 1);
    trace.z_samples[s] = z;
    const EigenSystem es = eigensystem(hamiltonian_at(profile, z));
    if (s == 0) {
      trace.tracks.row(0) = es.values.transpose();
      if (auto d = find_boundary_doublet(es)) trace.boundary_tracks = {d->lower, d->upper};
      prev_vectors = es.vectors;
      prev_values = es.values;
      continue;
    }
    double weakest = 1.0;
    const std::vector<int> next = match_tracks(prev_vectors, prev_values, es, &weakest);
    trace.min_overlap = std::min(trace.min_overlap, weakest);
    if (weakest < 0.5) {
      std::ostringstream msg;
      msg << "ambiguous track matching at z = " << z << " cm (overlap " << weakest << ")";
      trace.warnings.push_back(msg.str());
    }
    for (int t = 0; t < n; ++t) {
      trace.tracks(s, t) = es.values[next[t]];
      prev_vectors.col(t) = es.vectors.col(next[t]);
      prev_values[t] = es.values[next[t]];
    }
  }
  return trace;
}

std::vector<Band> bulk_bands(const HarperSchedule& schedule, double z) {
  const int q = schedule.b_bar().denominator;
  const double b = schedule.b_bar().value();
  const double lam = schedule.lambda()(z);
  const double phi = schedule.phi()(z);
  std::vector<double> hop(q);
  for (int n = 1; n <= q; ++n) {
    hop[n - 1] = schedule.kappa0() * (1.0 + lam * std::cos(2.0 * std::numbers::pi * b * n + phi));
  }
  auto spectrum = [&](double k) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(q, q);
    for (int n = 0; n + 1 < q; ++n) {
      h(n, n + 1) += hop[n];
      h(n + 1, n) += hop[n];
    }
    const std::complex<double> phase = std::polar(1.0, k);
    h(q - 1, 0) += hop[q - 1] * phase;
    h(0, q - 1) += hop[q - 1] * std::conj(phase);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return Eigen::VectorXd(solver.eigenvalues());
  };
  const Eigen::VectorXd at0 = spectrum(0.0);
  const Eigen::VectorXd atpi = spectrum(std::numbers::pi);
  std::vector<Band> bands(q);
  for (int j = 0; j < q; ++j) {
    bands[j] = {std::min(at0[j], atpi[j]), std::max(at0[j], atpi[j])};
  }
  return bands;
}

std::vector<Band> bulk_gaps(const HarperSchedule& schedule, double z) {
  const std::vector<Band> bands = bulk_bands(schedule, z);
  std::vector<Band> gaps;
  for (std::size_t j = 1; j < bands.size(); ++j) {
    gaps.push_back({bands[j - 1].upper, std::max(bands[j - 1].upper, bands[j].lower)});
  }
  return gaps;
}

int count_in_interval(const EigenSystem& es, const Band& interval) {
  int count = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] > interval.lower && es.values[i] < interval.upper) ++count;
  }
  return count;
}

}  // namespace topobs
