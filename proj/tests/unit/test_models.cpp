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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fidlab/ensembles.hpp"
#include "fidlab/errors.hpp"
#include "fidlab/models.hpp"
#include "fidlab/spectral.hpp"
#include "test_util.hpp"

namespace fidlab {
namespace {

using testing::max_abs;
using testing::phase_multiset_distance;

const Complex kI(0.0, 1.0);

TEST(Spin, Construction) {
  EXPECT_EQ(Spin::from_value(0.5).dim(), 2);
  EXPECT_EQ(Spin::for_qubits(10).value(), 511.5);
  EXPECT_EQ(Spin::for_qubits(10).dim(), 1024);
  EXPECT_THROW(Spin::from_value(0.3), Error);
  EXPECT_THROW(Spin::from_value(0.0), Error);
  try {
    Spin::from_value(1.25);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSpin);
  }
}

TEST(AngularMomentum, SpinHalf) {
  const auto a = angular_momentum(Spin::from_value(0.5));
  ComplexMatrix jz(2, 2), jy(2, 2);
  jz << 0.5, 0, 0, -0.5;
  jy << 0, -0.5 * kI, 0.5 * kI, 0;
  EXPECT_LT(max_abs(a.jz - jz), 1e-15);
  EXPECT_LT(max_abs(a.jy - jy), 1e-15);
}

TEST(AngularMomentum, SpinOne) {
  const auto a = angular_momentum(Spin::from_value(1.0));
  EXPECT_LT(max_abs(a.jz - ComplexMatrix(RealVector::LinSpaced(3, 1.0, -1.0)
                                              .cast<Complex>()
                                              .asDiagonal())),
            1e-15);
  const auto e = hermitian_eig(a.jy);
  EXPECT_NEAR(e.eigenvalues(0), -1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(1), 0.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(2), 1.0, 1e-14);
}

TEST(AngularMomentum, CommutationAndCasimir) {
  for (int twice : {1, 2, 7, 31}) {
    const Spin j = Spin::from_twice(twice);
    const auto a = angular_momentum(j);
    EXPECT_LT(hermiticity_defect(a.jy), 1e-13);
    EXPECT_LT(hermiticity_defect(a.jx), 1e-13);
    EXPECT_LT(max_abs(a.jy * a.jz - a.jz * a.jy - kI * a.jx), 1e-12);
    EXPECT_LT(max_abs(a.jz * a.jx - a.jx * a.jz - kI * a.jy), 1e-12);
    const ComplexMatrix casimir = a.jx * a.jx + a.jy * a.jy + a.jz * a.jz;
    const double jj = j.value() * (j.value() + 1.0);
    EXPECT_LT(max_abs(casimir - jj * ComplexMatrix::Identity(j.dim(), j.dim())), 1e-11);
  }
}

TEST(KickedTop, PureRotationHasFourfoldPeriod) {
  for (int twice : {1, 4, 9}) {
    const Spin j = Spin::from_twice(twice);
    const ComplexMatrix u = build_kicked_top({j, 0.0});
    const ComplexMatrix u4 = u * u * u * u;
    const double sign = (twice % 2 == 0) ? 1.0 : -1.0;
    EXPECT_LT(max_abs(u4 - sign * ComplexMatrix::Identity(j.dim(), j.dim())), 1e-9);
  }
}

TEST(KickedTop, SpinHalfKickIsGlobalPhase) {
  const Spin j = Spin::from_value(0.5);
  const ComplexMatrix rotation = build_kicked_top({j, 0.0});
  for (double k : {0.3, 3.7, 12.0}) {
    const ComplexMatrix u = build_kicked_top({j, k});
    // Strip the global phase using the largest entry.
    Index r = 0, c = 0;
    rotation.cwiseAbs().maxCoeff(&r, &c);
    const Complex phase = u(r, c) / rotation(r, c);
    EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
    EXPECT_LT(max_abs(u - phase * rotation), 1e-12);
    // exp(-i k m^2 / j) with m^2 = 1/4 and j = 1/2.
    EXPECT_LT(std::abs(phase - std::exp(-kI * k / 2.0)), 1e-12);
  }
}

TEST(KickedTop, UnitaryAndDeterministic) {
  const Spin j = Spin::for_qubits(6);
  const ComplexMatrix a = build_kicked_top({j, 12.0});
  EXPECT_LT(unitarity_defect(a), 1e-10);
  EXPECT_EQ(max_abs(a - build_kicked_top({j, 12.0})), 0.0);
}

TEST(KickedTop, CommutesWithFullRotationAndParity) {
  const Spin j = Spin::for_qubits(5);
  const ComplexMatrix u = build_kicked_top({j, 12.0});
  const auto a = angular_momentum(j);
  const ComplexMatrix r = exp_hermitian(a.jz, kTwoPi);
  EXPECT_LT(max_abs(u * r - r * u), 1e-9);
  const ComplexMatrix p = kicked_top_symmetry(j);
  EXPECT_LT(max_abs(u * p - p * u), 1e-9);
}

TEST(KickedTop, ChaoticAtLargeKick) {
  const Spin j = Spin::for_qubits(10);
  const ComplexMatrix u = build_kicked_top({j, 12.0});
  const auto h = nn_spacings_by_sector(u, kicked_top_symmetry(j));
  EXPECT_EQ(h.n_levels, 1024);
  EXPECT_LT(ks_distance(h, SpacingModel::kWignerGue), ks_distance(h, SpacingModel::kPoisson));
}

TEST(KickedTop, RegularAtSmallKick) {
  const Spin j = Spin::for_qubits(8);
  const ComplexMatrix u = build_kicked_top({j, 1.0});
  const auto h = nn_spacings_by_sector(u, kicked_top_symmetry(j));
  EXPECT_LT(ks_distance(h, SpacingModel::kPoisson), ks_distance(h, SpacingModel::kWignerGue));
}

TEST(CoordinateBases, JzIdentityAndJyDescending) {
  const Spin j = Spin::from_value(1.5);
  EXPECT_EQ(max_abs(jz_basis(j) - ComplexMatrix::Identity(4, 4)), 0.0);
  const ComplexMatrix b = jy_basis(j);
  const auto a = angular_momentum(j);
  EXPECT_LT(unitarity_defect(b), 1e-12);
  const ComplexMatrix d = b.adjoint() * a.jy * b;
  for (Index k = 0; k < 4; ++k) {
    EXPECT_NEAR(d(k, k).real(), 1.5 - double(k), 1e-12);
  }
  EXPECT_LT(max_abs(d - ComplexMatrix(d.diagonal().asDiagonal())), 1e-12);
}

TEST(GuePropagator, ZeroTauIsIdentity) {
  EXPECT_LT(max_abs(build_gue_propagator({0.0, {1, 1}}, 16) - ComplexMatrix::Identity(16, 16)),
            1e-15);
  EXPECT_THROW(build_gue_propagator({-1.0, {1, 1}}, 16), Error);
}

TEST(GuePropagator, PhasesScaleWithTau) {
  const EnsembleSeed seed{4, 2};
  const Index n = 64;
  const auto h = hermitian_eig(sample_gue(n, seed));
  for (double tau : {0.01, 0.3, 2.0}) {
    const ComplexMatrix u = build_gue_propagator({tau, seed}, n);
    EXPECT_LT(unitarity_defect(u), 1e-10);
    RealVector expected(n);
    for (Index k = 0; k < n; ++k) expected(k) = wrap_phase(tau * h.eigenvalues(k));
    EXPECT_LT(phase_multiset_distance(expected, unitary_eig(u).eigenphases), 1e-9);
  }
}

TEST(GuePropagator, PoissonAtLargeTau) {
  const Index n = 1024;
  const ComplexMatrix u = build_gue_propagator({100.0, {1, 1}}, n);
  const auto h = nn_spacings(u);
  EXPECT_LT(ks_distance(h, SpacingModel::kPoisson), ks_distance(h, SpacingModel::kWignerGue));
}

}  // namespace
}  // namespace fidlab
