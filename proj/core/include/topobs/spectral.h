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

// Instantaneous eigensystems, band tracking along z, boundary-state
// identification and gap diagnostics.

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topobs/model.h"
#include "topobs/state.h"

namespace topobs {

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i belongs to values[i]
};

/// Symmetric tridiagonal eigensolve. Palindromic bond vectors are solved in
/// the mirror-even and mirror-odd sectors separately, so every returned
/// eigenvector has definite site-reversal parity (even first on exact ties).
/// Signs are fixed so the first component with at least half the maximum
/// magnitude is positive.
EigenSystem eigensystem(const Hamiltonian& h);

/// Dense variant. Throws ContractViolation if `h` is not symmetric.
EigenSystem eigensystem(const Eigen::MatrixXd& h);

/// Probability on the `edge_width` outermost sites of one side.
/// Throws ContractViolation if the state is not normalized to 1e-8 or if
/// edge_width is not in 1..N/2.
double edge_localization(const ModeState& state, int edge_width, Side side = Side::kLeft);

/// Weight on both edges (edge_width sites each) of a real unit vector.
double two_sided_edge_weight(const Eigen::VectorXd& v, int edge_width);

/// Two adjacent eigen-indices forming an edge-localized pair inside a gap.
struct Doublet {
  int lower;
  int upper;
};

/// All mid-gap doublets: adjacent eigenpairs whose vectors both carry more
/// than half their weight on the two edges (edge_width sites each side)
/// and whose clearance to the neighbouring eigenvalues exceeds twice their
/// splitting. Ascending in energy.
std::vector<Doublet> find_midgap_doublets(const EigenSystem& es, int edge_width = 2);

/// The doublet hosting the even (in-phase) edge mode: for positive
/// couplings, the highest-energy mid-gap doublet.
std::optional<Doublet> find_boundary_doublet(const EigenSystem& es, int edge_width = 2);

/// Smallest distance from a boundary eigenvalue to any eigenvalue outside
/// the boundary set; 0 when the set is empty.
double gap_at(const EigenSystem& es, std::span<const int> boundary_indices);

/// Maximum-overlap assignment of the columns of `previous` to the
/// eigenvectors of `next`: result[t] is the index in `next` continuing
/// track t. Ties in overlap are broken by eigenvalue proximity to
/// `previous_values`. `min_overlap` receives the weakest accepted overlap.
std::vector<int> match_tracks(const Eigen::MatrixXd& previous,
                              const Eigen::VectorXd& previous_values,
                              const EigenSystem& next, double* min_overlap = nullptr);

struct BandTrace {
  std::vector<double> z_samples;
  /// Row s, column t: eigenvalue of track t at z_samples[s].
  Eigen::MatrixXd tracks;
  /// Track indices of the boundary doublet found at z = 0 (empty if none).
  std::vector<int> boundary_tracks;
  double min_overlap = 1.0;
  std::vector<std::string> warnings;
};

/// Eigenvalues on n_samples evenly spaced z in [0, L], stitched into
/// continuous tracks by eigenvector overlap.
BandTrace band_trace(const DeviceProfile& profile, int n_samples);

/// Edges of one bulk band of the infinite lattice.
struct Band {
  double lower;
  double upper;
};

/// Bulk bands of the infinite Harper lattice at position z, from the
/// q-site Bloch Hamiltonian (b = p/q). Band edges of a periodic
/// nearest-neighbour chain sit at k = 0 and k = pi, so the result is exact.
std::vector<Band> bulk_bands(const HarperSchedule& schedule, double z);

/// Open intervals between consecutive bulk bands (width max(0, ...)).
std::vector<Band> bulk_gaps(const HarperSchedule& schedule, double z);

/// Number of eigenvalues strictly inside (lower, upper).
int count_in_interval(const EigenSystem& es, const Band& interval);

}  // namespace topobs
