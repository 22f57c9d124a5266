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

#include "fidlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "fidlab/errors.hpp"

namespace fidlab {
namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
constexpr double kEigResidualTol = 1e-9;

// Any fixed irrational-looking offset works; it only has to avoid landing
// exactly on an eigenphase for the first attempt.
constexpr double kInitialRotation = 0.7853981633974483 * 1.2360679774997896;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::kDimMismatch,
                std::string(what) + " must be a non-empty square matrix");
  }
}

void require_hermitian(const ComplexMatrix& h) {
  require_square(h, "Hermitian input");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
    throw Error(ErrorCode::kNotHermitian, "input deviates from its adjoint");
  }
}

HermitianEigen solve_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNoConvergence,
                "Hermitian eigensolver exceeded its iteration cap");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Hermitian generator i(1 - W)(1 + W)^-1 of W = exp(i alpha) U.
ComplexMatrix cayley_generator(const ComplexMatrix& u, double alpha) {
  const Index n = u.rows();
  const ComplexMatrix w = std::polar(1.0, alpha) * u;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  Eigen::PartialPivLU<ComplexMatrix> lu(id + w);
  ComplexMatrix g = Complex(0.0, 1.0) * lu.solve(id - w);
  return 0.5 * (g + g.adjoint());
}

// Rotation that sends the middle of the widest spectral gap to -1.
double rotation_for_widest_gap(std::vector<double> phases) {
  std::sort(phases.begin(), phases.end());
  double best_gap = phases.front() + kTwoPi - phases.back();
  double best_mid = phases.back() + 0.5 * best_gap;
  for (std::size_t i = 1; i < phases.size(); ++i) {
    const double gap = phases[i] - phases[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      best_mid = phases[i - 1] + 0.5 * gap;
    }
  }
  return wrap_phase(best_mid - std::numbers::pi);
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const ComplexMatrix gram = u.adjoint() * u;
  return (gram - ComplexMatrix::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double wrap_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

StateVector basis_state(Index dim, Index index) {
  if (index < 0 || index >= dim) {
    throw Error(ErrorCode::kInvalidArgument,
                "basis index " + std::to_string(index) + " outside dimension " +
                    std::to_string(dim));
  }
  StateVector v = StateVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

HermitianEigen hermitian_eig(const ComplexMatrix& h) {
  require_hermitian(h);
  return solve_hermitian(h);
}

UnitaryEigen unitary_eig(const ComplexMatrix& u) {
  require_square(u, "unitary_eig input");
  if (unitarity_defect(u) > kUnitaryTol) {
    throw Error(ErrorCode::kNotUnitary, "U^dagger U deviates from identity");
  }
  const Index n = u.rows();
  // The generator norm is tan(dist/2) where dist is the distance from the
  // spectrum to the rotation point; n keeps it safely conditioned.
  const double norm_cap = static_cast<double>(std::max<Index>(n, 8));

  double alpha = kInitialRotation;
  HermitianEigen gen_eig;
  for (int attempt = 0;; ++attempt) {
    gen_eig = solve_hermitian(cayley_generator(u, alpha));
    if (gen_eig.eigenvalues.cwiseAbs().maxCoeff() <= norm_cap || attempt > 0) {
      break;
    }
    std::vector<double> rough(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
      rough[k] = wrap_phase(alpha - 2.0 * std::atan(gen_eig.eigenvalues(k)));
    }
    alpha = rotation_for_widest_gap(std::move(rough));
  }

  const ComplexMatrix& vecs = gen_eig.vectors;
  const ComplexMatrix image = u * vecs;
  RealVector phases(n);
  double worst = 0.0;
  for (Index k = 0; k < n; ++k) {
    const Complex rayleigh = vecs.col(k).dot(image.col(k));
    phases(k) = wrap_phase(-std::arg(rayleigh));
    const Complex eig = std::polar(1.0, -phases(k));
    worst = std::max(worst, (image.col(k) - eig * vecs.col(k)).norm());
  }
  if (worst > kEigResidualTol) {
    throw Error(ErrorCode::kNoConvergence,
                "unitary eigenpair residual " + std::to_string(worst));
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return phases(a) < phases(b); });
  UnitaryEigen out{RealVector(n), ComplexMatrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.eigenphases(k) = phases(order[k]);
    out.vectors.col(k) = vecs.col(order[k]);
  }
  return out;
}

ComplexMatrix exp_hermitian(const HermitianEigen& eig, double t) {
  const Index n = eig.eigenvalues.size();
  Eigen::VectorXcd phase(n);
  for (Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, -eig.eigenvalues(k) * t);
  return (eig.vectors * phase.asDiagonal()) * eig.vectors.adjoint();
}

ComplexMatrix exp_hermitian(const ComplexMatrix& h, double t) {
  if (!std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidArgument, "exp_hermitian time must be finite");
  }
  if (t == 0.0) {
    require_hermitian(h);
    return ComplexMatrix::Identity(h.rows(), h.cols());
  }
  return exp_hermitian(hermitian_eig(h), t);
}

StateVector apply(const ComplexMatrix& m, const StateVector& v) {
  if (m.cols() != v.size()) {
    throw Error(ErrorCode::kDimMismatch, "matrix/vector dimensions differ");
  }
  return m * v;
}

Complex inner(const StateVector& u, const StateVector& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kDimMismatch, "vector dimensions differ");
  }
  return u.dot(v);
}

}  // namespace fidlab
