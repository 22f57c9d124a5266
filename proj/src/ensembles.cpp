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

#include "fidlab/ensembles.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

#include "fidlab/errors.hpp"

namespace fidlab {
namespace {

void require_dim(Index n) {
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "ensemble dimension must be >= 2, got " + std::to_string(n));
  }
}

ComplexMatrix ginibre(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix z(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  return z;
}

ComplexMatrix cue_by_qr(Index n, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(n, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    // A zero pivot has probability zero; leave that column's phase alone.
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace

Rng make_rng(EnsembleSeed seed) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed.master_seed),
      static_cast<std::uint32_t>(seed.master_seed >> 32),
      static_cast<std::uint32_t>(seed.stream_id),
      static_cast<std::uint32_t>(seed.stream_id >> 32),
  };
  return Rng(seq);
}

ComplexMatrix sample_gue(Index n, EnsembleSeed seed) {
  require_dim(n);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> diag(0.0, 1.0);
  std::normal_distribution<double> off(0.0, std::sqrt(0.5));
  ComplexMatrix h(n, n);
  for (Index j = 0; j < n; ++j) {
    h(j, j) = diag(rng);
    for (Index i = j + 1; i < n; ++i) {
      const double re = off(rng);
      const double im = off(rng);
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  return h;
}

ComplexMatrix sample_cue(Index n, EnsembleSeed seed, CueMethod method) {
  require_dim(n);
  if (method == CueMethod::kQrGinibre) {
    Rng rng = make_rng(seed);
    return cue_by_qr(n, rng);
  }
  // Eigenvectors alone carry an arbitrary per-column phase chosen by the
  // solver; randomizing it restores the Haar measure.
  ComplexMatrix v = hermitian_eig(sample_gue(n, seed)).vectors;
  Rng rng = make_rng({seed.master_seed, ~seed.stream_id});
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  for (Index k = 0; k < n; ++k) v.col(k) *= std::polar(1.0, uniform(rng));
  return v;
}

ComplexMatrix sample_basis_change(Index n, EnsembleSeed seed) {
  return sample_cue(n, seed, CueMethod::kQrGinibre);
}

}  // namespace fidlab
