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

#include "fidlab/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fidlab/errors.hpp"

namespace fidlab {

Spin Spin::from_twice(int twice_j) {
  if (twice_j <= 0) {
    throw Error(ErrorCode::kInvalidSpin,
                "2j must be a positive integer, got " + std::to_string(twice_j));
  }
  return Spin(twice_j);
}

Spin Spin::from_value(double j) {
  const double twice = 2.0 * j;
  if (!std::isfinite(twice) || twice != std::round(twice) || twice <= 0.0 ||
      twice > 1e8) {
    throw Error(ErrorCode::kInvalidSpin,
                "spin must be a positive multiple of 1/2, got " + std::to_string(j));
  }
  return Spin(static_cast<int>(twice));
}

Spin Spin::for_qubits(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 24) {
    throw Error(ErrorCode::kInvalidSpin,
                "qubit count out of range: " + std::to_string(n_qubits));
  }
  return Spin((1 << n_qubits) - 1);
}

AngularMomentum angular_momentum(Spin j) {
  const Index n = j.dim();
  const double jv = j.value();
  ComplexMatrix raise = ComplexMatrix::Zero(n, n);
  ComplexMatrix jz = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const double m = jv - static_cast<double>(i);
    jz(i, i) = m;
    // <m+1|J+|m>; |m+1> sits one row above |m>.
    if (i > 0) raise(i - 1, i) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  AngularMomentum out;
  out.jx = 0.5 * (raise + lower);
  out.jy = (raise - lower) / Complex(0.0, 2.0);
  out.jz = std::move(jz);
  return out;
}

ComplexMatrix build_kicked_top(const KickedTopParams& p) {
  if (!std::isfinite(p.k)) {
    throw Error(ErrorCode::kInvalidArgument, "kick strength must be finite");
  }
  const AngularMomentum am = angular_momentum(p.j);
  ComplexMatrix u = exp_hermitian(am.jy, std::numbers::pi / 2.0);
  const double jv = p.j.value();
  for (Index i = 0; i < u.cols(); ++i) {
    const double m = jv - static_cast<double>(i);
    u.col(i) *= std::polar(1.0, -p.k * m * m / jv);
  }
  return u;
}

ComplexMatrix build_gue_propagator(const GuePropagatorParams& p, Index n) {
  if (!std::isfinite(p.tau) || p.tau < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "tau must be finite and >= 0");
  }
  return exp_hermitian(sample_gue(n, p.seed), p.tau);
}

ComplexMatrix kicked_top_symmetry(Spin j) {
  return exp_hermitian(angular_momentum(j).jy, std::numbers::pi);
}

ComplexMatrix jz_basis(Spin j) {
  return ComplexMatrix::Identity(j.dim(), j.dim());
}

ComplexMatrix jy_basis(Spin j) {
  // Ascending eigenvalues from the solver; reverse to match the J_z order.
  return hermitian_eig(angular_momentum(j).jy).vectors.rowwise().reverse();
}

}  // namespace fidlab
