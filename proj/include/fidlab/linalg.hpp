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

#ifndef FIDLAB_LINALG_HPP
#define FIDLAB_LINALG_HPP

#include <complex>

#include <Eigen/Dense>

namespace fidlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Spectral decomposition of a Hermitian matrix. Eigenvalues ascend and the
/// columns of `vectors` are the matching orthonormal eigenvectors.
struct HermitianEigen {
  RealVector eigenvalues;
  ComplexMatrix vectors;
};

/// Spectral decomposition of a unitary matrix with the convention
/// U v_m = exp(-i phi_m) v_m. Phases lie in [0, 2pi) and ascend.
struct UnitaryEigen {
  RealVector eigenphases;
  ComplexMatrix vectors;
};

/// max |H - H^dagger|.
double hermiticity_defect(const ComplexMatrix& h);
/// max |U^dagger U - I|.
double unitarity_defect(const ComplexMatrix& u);

/// Maps any real phase into [0, 2pi).
double wrap_phase(double phi);

StateVector basis_state(Index dim, Index index);

/// Throws NotHermitian when the input is not Hermitian to 1e-12 (relative to
/// max(1, max|H_ij|)) and NoConvergence if the iteration fails.
HermitianEigen hermitian_eig(const ComplexMatrix& h);

/// The decomposition is computed from the Hermitian Cayley generator
/// i(1 - W)(1 + W)^-1 of a phase-rotated copy W = exp(i alpha) U. The rotation
/// is placed in the widest gap of the spectrum so the generator stays well
/// conditioned; the phases are then refined as Rayleigh quotients and every
/// eigenpair residual is checked against 1e-9.
UnitaryEigen unitary_eig(const ComplexMatrix& u);

/// exp(-i H t) assembled from the spectral decomposition of H.
ComplexMatrix exp_hermitian(const ComplexMatrix& h, double t);
ComplexMatrix exp_hermitian(const HermitianEigen& eig, double t);

StateVector apply(const ComplexMatrix& m, const StateVector& v);

/// <u|v>, conjugate-linear in the first argument.
Complex inner(const StateVector& u, const StateVector& v);

}  // namespace fidlab

#endif  // FIDLAB_LINALG_HPP
