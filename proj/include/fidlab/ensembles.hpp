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

#ifndef FIDLAB_ENSEMBLES_HPP
#define FIDLAB_ENSEMBLES_HPP

#include <cstdint>
#include <random>

#include "fidlab/linalg.hpp"

namespace fidlab {

/// Identifies one independent random stream. Every sampler builds its
/// generator from both words, so draws for different stream ids never share
/// state and can be produced in any order.
struct EnsembleSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const EnsembleSeed&, const EnsembleSeed&) = default;
};

using Rng = std::mt19937_64;

Rng make_rng(EnsembleSeed seed);

enum class CueMethod {
  kQrGinibre,    // QR of a complex Ginibre matrix with the R-diagonal phase fix
  kEigvecOfGue,  // GUE eigenvectors with independently randomized column phases
};

/// Hermitian matrix with N(0,1) diagonal and off-diagonal real and imaginary
/// parts ~ N(0,1/2), so E|H_ij|^2 = 1 for i != j.
ComplexMatrix sample_gue(Index n, EnsembleSeed seed);

/// Haar-distributed unitary.
ComplexMatrix sample_cue(Index n, EnsembleSeed seed,
                         CueMethod method = CueMethod::kQrGinibre);

/// Random change of basis; same distribution as sample_cue.
ComplexMatrix sample_basis_change(Index n, EnsembleSeed seed);

}  // namespace fidlab

#endif  // FIDLAB_ENSEMBLES_HPP
