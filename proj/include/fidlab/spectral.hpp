// Copyright 2026 The fidelity-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIDLAB_SPECTRAL_HPP
#define FIDLAB_SPECTRAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fidlab/fidelity.hpp"
#include "fidlab/linalg.hpp"

namespace fidlab {

enum class SpacingModel { kPoisson, kWignerGue };

/// Nearest-neighbour spacings of eigenphases on the unit circle, unfolded to
/// unit mean. `counts[b]` holds the spacings in [edges[b], edges[b+1]).
struct SpacingHistogram {
  RealVector spacings;  // sorted ascending
  RealVector edges;
  std::vector<std::int64_t> counts;
  Index n_levels = 0;
};

/// Local density of states of one unperturbed eigenstate over the perturbed
/// eigenbasis: weights[m] = |<v_o|v'_m>|^2 at perturbed phase phases[m].
/// `dim` is the Hilbert-space dimension, which fixes the mean level spacing
/// 2 pi / dim; a pooled profile holds more weights than levels.
struct LdosProfile {
  double center_phase = 0.0;
  RealVector weights;
  RealVector phases;
  Index dim = 0;
};

struct LorentzianFit {
  double width = 0.0;  // full width at half maximum, radians
  double center = 0.0;
  double amplitude = 0.0;
  double rss = 0.0;
};

inline constexpr int kHistogramBins = 32;
inline constexpr double kHistogramMax = 4.0;

/// Spacings of a set of eigenphases (any order, values in [0, 2pi)),
/// including the wrap-around gap.
SpacingHistogram spacings_from_phases(const RealVector& phases);

SpacingHistogram nn_spacings(const ComplexMatrix& u);

/// Spacings of U resolved by the eigenspaces of a unitary symmetry S that
/// commutes with U. Each sector is unfolded by its own dimension and the
/// sector spacings are pooled, so levels of different sectors never
/// neighbour each other.
SpacingHistogram nn_spacings_by_sector(const ComplexMatrix& u,
                                       const ComplexMatrix& symmetry);

/// Poisson: exp(-s). WignerGue: (32/pi^2) s^2 exp(-4 s^2 / pi).
double reference_pdf(SpacingModel model, double s);
double reference_cdf(SpacingModel model, double s);

/// Kolmogorov-Smirnov sup distance between the empirical spacing CDF and the
/// model CDF. Needs at least 50 levels.
double ks_distance(const SpacingHistogram& h, SpacingModel model);

LdosProfile ldos(const ComplexMatrix& u, const ComplexMatrix& up,
                 Index eigenstate_index);
/// Variant that reuses decompositions of U and U_p U.
LdosProfile ldos(const UnitaryEigen& unperturbed, const UnitaryEigen& perturbed,
                 Index eigenstate_index);

/// Eigenstate average of several profiles: each is re-centred on phase zero
/// and its weights are scaled by 1/count, so the pooled weights still sum to 1.
LdosProfile pooled_ldos(std::span<const LdosProfile> profiles);

/// Fits A (G/2) / ((x - c)^2 + (G/2)^2), integrated over each bin, to the
/// LDOS weights binned in x = phi_o - phi'_m (wrapped to (-pi, pi]). Bins are
/// `aggregation` mean level spacings wide with one bin centred on zero.
LorentzianFit lorentzian_fit(const LdosProfile& p, int aggregation = 4);

/// |sum_m eta_m exp(-i (phi_o - phi'_m) n)|^2 for n = 0..n_max.
FidelityCurve fidelity_from_ldos(const LdosProfile& p, Index n_max);

}  // namespace fidlab

#endif  // FIDLAB_SPECTRAL_HPP
