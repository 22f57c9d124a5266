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

#ifndef FIDLAB_FIDELITY_HPP
#define FIDLAB_FIDELITY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fidlab/ensembles.hpp"
#include "fidlab/linalg.hpp"

namespace fidlab {

/// O(n) for n = 0..n_max. `values` and `std` are the mean and population
/// standard deviation over the initial states in `per_state` (one column per
/// state); a single-state curve carries a zero std.
struct FidelityCurve {
  RealVector values;
  RealVector std;
  Eigen::MatrixXd per_state;

  Index n_max() const { return values.size() - 1; }
};

struct RateFit {
  double gamma_fit = 0.0;
  double r2 = 0.0;
  Index n_lo = 0;
  Index n_hi = 0;
};

/// One emulated run of the echo protocol: prepare |prep_state_index> by bit
/// flips on |0...0>, apply (U^dagger)^n (U_p U)^n, undo the preparation and
/// count |0...0> outcomes over `shots` measurements.
struct ProtocolRun {
  Index prep_state_index = 0;
  std::uint64_t shots = 0;
  double probability = 0.0;  // exact |<0...0|psi_f>|^2
  double estimate = 0.0;     // successes / shots
  double stderr_estimate = 0.0;
};

/// Forward-pair evolution: |<U^n psi0 | (U_p U)^n psi0>|^2, advanced one
/// mat-vec per branch per step.
FidelityCurve fidelity_curve(const ComplexMatrix& u, const ComplexMatrix& up,
                             const StateVector& psi0, Index n_max);

/// Same as fidelity_curve for every column of `initial_states` at once; the
/// result carries per-state curves and their mean/std.
FidelityCurve fidelity_curves(const ComplexMatrix& u, const ComplexMatrix& up,
                              const ComplexMatrix& initial_states, Index n_max);

/// Convenience wrapper over fidelity_curves for computational basis states.
FidelityCurve basis_state_curves(const ComplexMatrix& u, const ComplexMatrix& up,
                                 std::span<const Index> indices, Index n_max);

/// Echo ordering |<psi0|(U^dagger)^n (U_p U)^n psi0>|^2. Each n is evaluated
/// independently, so the cost is quadratic in n_max; intended as a reference.
FidelityCurve echo_curve(const ComplexMatrix& u, const ComplexMatrix& up,
                         const StateVector& psi0, Index n_max);

ProtocolRun sampled_fidelity(const ComplexMatrix& u, const ComplexMatrix& up,
                             Index prep_state_index, Index n,
                             std::uint64_t shots, EnsembleSeed seed);

/// Replaces every per-state value by a binomial shot estimate with the exact
/// value as success probability. State column s draws from stream
/// seed.stream_id + s.
FidelityCurve shot_sample(const FidelityCurve& exact, std::uint64_t shots,
                          EnsembleSeed seed);

/// Pointwise mean/std over the curves, reduced in index order.
FidelityCurve average_curves(std::span<const FidelityCurve> curves);

/// Log-linear least squares over n in [1, n*], n* being the first n with
/// O(n) < max(5/N, 0.02) (or n_max). Throws WindowTooSmall when n* < 4 or
/// when the curve does not decay.
RateFit fit_rate(const FidelityCurve& curve, Index dim);

/// max(exp(-gamma n), 1/N).
FidelityCurve theory_curve(double gamma, Index n_max, Index dim);

/// Mean of O(n) over n in [2 ln N / gamma, n_max]; the curve must extend past
/// 3 ln N / gamma (CurveTooShort otherwise).
double saturation_level(const FidelityCurve& curve, double gamma, Index dim);

/// First n at which the curve comes within a factor two of `plateau`.
Index saturation_onset(const FidelityCurve& curve, double plateau);

/// The first `count` entries of a seeded shuffle of 0..N-1.
std::vector<Index> select_initial_states(Index dim, Index count,
                                         EnsembleSeed seed);

}  // namespace fidlab

#endif  // FIDLAB_FIDELITY_HPP
