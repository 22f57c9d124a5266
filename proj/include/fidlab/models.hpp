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

#ifndef FIDLAB_MODELS_HPP
#define FIDLAB_MODELS_HPP

#include "fidlab/ensembles.hpp"
#include "fidlab/linalg.hpp"

namespace fidlab {

/// Spin quantum number stored as the integer 2j, so half-integer spins are
/// exact.
class Spin {
 public:
  static Spin from_twice(int twice_j);
  /// Throws InvalidSpin unless 2j is a positive integer.
  static Spin from_value(double j);
  /// The spin whose multiplet has dimension 2^n_qubits.
  static Spin for_qubits(int n_qubits);

  int twice() const { return twice_; }
  double value() const { return 0.5 * twice_; }
  Index dim() const { return static_cast<Index>(twice_) + 1; }

  friend bool operator==(const Spin&, const Spin&) = default;

 private:
  explicit Spin(int twice_j) : twice_(twice_j) {}
  int twice_;
};

struct KickedTopParams {
  Spin j = Spin::from_twice(1);
  double k = 0.0;
};

struct GuePropagatorParams {
  double tau = 0.0;
  EnsembleSeed seed;
};

/// Spin operators in the J_z eigenbasis ordered m = j, j-1, ..., -j.
struct AngularMomentum {
  ComplexMatrix jx;
  ComplexMatrix jy;
  ComplexMatrix jz;
};

AngularMomentum angular_momentum(Spin j);

/// U = exp(-i pi J_y / 2) exp(-i k J_z^2 / j).
ComplexMatrix build_kicked_top(const KickedTopParams& p);

/// U = exp(-i H tau) for H drawn by sample_gue(n, p.seed).
ComplexMatrix build_gue_propagator(const GuePropagatorParams& p, Index n);

/// exp(-i pi J_y), the rotation by pi about y. It commutes with every
/// kicked-top map and splits the spectrum into two parity sectors.
ComplexMatrix kicked_top_symmetry(Spin j);

/// Column k is the k-th J_z eigenvector (descending m); this is the identity.
ComplexMatrix jz_basis(Spin j);
/// Column k is the J_y eigenvector with the k-th largest eigenvalue.
ComplexMatrix jy_basis(Spin j);

}  // namespace fidlab

#endif  // FIDLAB_MODELS_HPP
