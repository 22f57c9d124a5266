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

#ifndef FIDLAB_PERTURBATIONS_HPP
#define FIDLAB_PERTURBATIONS_HPP

#include <variant>

#include "fidlab/ensembles.hpp"
#include "fidlab/linalg.hpp"

namespace fidlab {

/// Perturbation diagonal in the computational (qubit) basis.
struct Computational {};

/// Perturbation diagonal in the basis whose k-th column is `transform.col(k)`;
/// computational index k is assigned to that column.
struct CoordinateBasis {
  ComplexMatrix transform;
};

/// Perturbation diagonal in a Haar-random basis T = sample_basis_change(seed).
struct RandomCue {
  EnsembleSeed seed;
};

using PerturbationBasis = std::variant<Computational, CoordinateBasis, RandomCue>;

/// Collective z rotation of n_qubits qubits by delta, U_p = exp(-i delta V),
/// with the eigenbasis of V placed according to `basis`.
struct PerturbationSpec {
  int n_qubits = 1;
  double delta = 0.0;
  PerturbationBasis basis = Computational{};

  Index dim() const { return Index{1} << n_qubits; }
};

/// Golden-rule decay rate and the quantities it is built from.
struct FgrPrediction {
  double gamma = 0.0;        // decay rate per iteration
  double sigma2 = 0.0;       // delta^2 * lambda_var / N
  double delta_level = 0.0;  // mean level spacing 2 pi / N
  double lambda_var = 0.0;   // second moment of the generator spectrum
};

/// Eigenvalues of sum_j sigma_z^j / 2 in computational-index order:
/// entry i is (n_q - 2 popcount(i)) / 2.
RealVector collective_z_spectrum(int n_qubits);

/// (1/N) sum_k ((2k - n_q)/2)^2 C(n_q, k), evaluated from the binomial sum.
double spectrum_variance(int n_qubits);

FgrPrediction fgr_rate(const PerturbationSpec& spec);

/// The Hermitian generator V in the configured basis.
ComplexMatrix perturbation_generator(const PerturbationSpec& spec);

/// U_p = B exp(-i delta diag(lambda)) B^dagger for the configured basis B.
ComplexMatrix build_perturbation(const PerturbationSpec& spec);

}  // namespace fidlab

#endif  // FIDLAB_PERTURBATIONS_HPP
