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

#include "fidlab/perturbations.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

#include "fidlab/errors.hpp"

namespace fidlab {
namespace {

constexpr int kMaxQubits = 24;
constexpr double kTransformUnitaryTol = 1e-10;

void require_qubits(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw Error(ErrorCode::kInvalidArgument,
                "qubit count must lie in [1, 24], got " + std::to_string(n_qubits));
  }
}

void validate(const PerturbationSpec& spec) {
  require_qubits(spec.n_qubits);
  if (!std::isfinite(spec.delta) || spec.delta < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be finite and >= 0");
  }
  if (const auto* coord = std::get_if<CoordinateBasis>(&spec.basis)) {
    const Index n = spec.dim();
    if (coord->transform.rows() != n || coord->transform.cols() != n) {
      throw Error(ErrorCode::kDimMismatch,
                  "coordinate transform must be " + std::to_string(n) + "x" +
                      std::to_string(n));
    }
    if (unitarity_defect(coord->transform) > kTransformUnitaryTol) {
      throw Error(ErrorCode::kNotUnitary, "coordinate transform is not unitary");
    }
  }
}

// B diag(d) B^dagger for a unitary B.
template <typename Diag>
ComplexMatrix conjugate_diagonal(const ComplexMatrix& b, const Diag& d) {
  return (b * d.asDiagonal()) * b.adjoint();
}

template <typename Diag>
ComplexMatrix in_basis(const PerturbationSpec& spec, const Diag& d) {
  return std::visit(
      [&](const auto& basis) -> ComplexMatrix {
        using T = std::decay_t<decltype(basis)>;
        if constexpr (std::is_same_v<T, Computational>) {
          return d.asDiagonal();
        } else if constexpr (std::is_same_v<T, CoordinateBasis>) {
          return conjugate_diagonal(basis.transform, d);
        } else {
          return conjugate_diagonal(sample_basis_change(spec.dim(), basis.seed), d);
        }
      },
      spec.basis);
}

}  // namespace

RealVector collective_z_spectrum(int n_qubits) {
  require_qubits(n_qubits);
  const Index n = Index{1} << n_qubits;
  RealVector lambda(n);
  for (Index i = 0; i < n; ++i) {
    const int weight = std::popcount(static_cast<std::uint64_t>(i));
    lambda(i) = 0.5 * static_cast<double>(n_qubits - 2 * weight);
  }
  return lambda;
}

double spectrum_variance(int n_qubits) {
  require_qubits(n_qubits);
  // Every term is an integer multiple of 1/4 below 2^53, so the sum is exact.
  double binom = 1.0;
  double sum = 0.0;
  for (int k = 0; k <= n_qubits; ++k) {
    const double level = 0.5 * static_cast<double>(2 * k - n_qubits);
    sum += level * level * binom;
    binom = binom * static_cast<double>(n_qubits - k) / static_cast<double>(k + 1);
  }
  return std::ldexp(sum, -n_qubits);
}

FgrPrediction fgr_rate(const PerturbationSpec& spec) {
  validate(spec);
  const double n = static_cast<double>(spec.dim());
  FgrPrediction p;
  p.lambda_var = spectrum_variance(spec.n_qubits);
  p.gamma = spec.delta * spec.delta * p.lambda_var;
  p.sigma2 = p.gamma / n;
  p.delta_level = kTwoPi / n;
  return p;
}

ComplexMatrix perturbation_generator(const PerturbationSpec& spec) {
  validate(spec);
  const RealVector lambda = collective_z_spectrum(spec.n_qubits);
  const Eigen::VectorXcd d = lambda.cast<Complex>();
  return in_basis(spec, d);
}

ComplexMatrix build_perturbation(const PerturbationSpec& spec) {
  validate(spec);
  const RealVector lambda = collective_z_spectrum(spec.n_qubits);
  Eigen::VectorXcd d(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) {
    d(i) = std::polar(1.0, -spec.delta * lambda(i));
  }
  return in_basis(spec, d);
}

}  // namespace fidlab
