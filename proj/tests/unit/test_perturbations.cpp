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

#include <bit>
#include <cmath>
#include <map>
#include <numbers>

#include "fidlab/ensembles.hpp"
#include "fidlab/errors.hpp"
#include "fidlab/models.hpp"
#include "fidlab/perturbations.hpp"
#include "test_util.hpp"

namespace fidlab {
namespace {

using testing::max_abs;
using testing::phase_multiset_distance;

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

RealVector perturbation_phases(const PerturbationSpec& spec) {
  const RealVector lambda = collective_z_spectrum(spec.n_qubits);
  return lambda.unaryExpr([&](double l) { return wrap_phase(spec.delta * l); });
}

TEST(CollectiveZSpectrum, SmallRegisters) {
  RealVector one(2), two(4);
  one << 0.5, -0.5;
  two << 1.0, 0.0, 0.0, -1.0;
  EXPECT_EQ(collective_z_spectrum(1), one);
  EXPECT_EQ(collective_z_spectrum(2), two);
}

TEST(CollectiveZSpectrum, BinomialMultiplicities) {
  const int nq = 10;
  const RealVector s = collective_z_spectrum(nq);
  std::map<double, int> counts;
  for (double x : s) ++counts[x];
  ASSERT_EQ(counts.size(), 11u);
  for (int k = 0; k <= nq; ++k) {
    EXPECT_EQ(counts[(2.0 * k - nq) / 2.0], binomial(nq, k));
  }
  EXPECT_EQ(s.sum(), 0.0);
  for (Index i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s(i), (nq - 2.0 * std::popcount(static_cast<unsigned>(i))) / 2.0);
  }
}

TEST(SpectrumVariance, MatchesQuarterQubitCount) {
  EXPECT_EQ(spectrum_variance(1), 0.25);
  EXPECT_EQ(spectrum_variance(2), 0.5);
  EXPECT_EQ(spectrum_variance(10), 2.5);
  for (int nq = 1; nq <= 24; ++nq) EXPECT_EQ(spectrum_variance(nq), nq / 4.0) << nq;
  EXPECT_NEAR(collective_z_spectrum(12).array().square().mean(), 3.0, 1e-15);
}

TEST(SpectrumVariance, RejectsOutOfRange) {
  EXPECT_THROW(spectrum_variance(0), Error);
  EXPECT_THROW(spectrum_variance(25), Error);
}

TEST(FgrRate, Values) {
  EXPECT_NEAR(fgr_rate({10, 0.1, Computational{}}).gamma, 0.025, 1e-15);
  EXPECT_NEAR(fgr_rate({10, 0.4, Computational{}}).gamma, 0.4, 1e-15);
  EXPECT_EQ(fgr_rate({10, 0.0, Computational{}}).gamma, 0.0);
  const auto p = fgr_rate({8, 0.3, Computational{}});
  EXPECT_NEAR(p.gamma, kTwoPi * p.sigma2 / p.delta_level, 1e-15);
  EXPECT_NEAR(p.delta_level, kTwoPi / 256, 1e-15);
  EXPECT_EQ(p.lambda_var, 2.0);
  EXPECT_THROW(fgr_rate({8, -0.1, Computational{}}), Error);
}

TEST(BuildPerturbation, ZeroDeltaIsIdentity) {
  EXPECT_EQ(max_abs(build_perturbation({3, 0.0, Computational{}}) -
                    ComplexMatrix::Identity(8, 8)),
            0.0);
  EXPECT_LT(max_abs(build_perturbation({3, 0.0, RandomCue{{1, 1}}}) -
                    ComplexMatrix::Identity(8, 8)),
            1e-14);
}

TEST(BuildPerturbation, TwoQubitsAtPi) {
  const ComplexMatrix up = build_perturbation({2, std::numbers::pi, Computational{}});
  RealVector expected(4);
  expected << -1.0, 1.0, 1.0, -1.0;
  EXPECT_LT(max_abs(up - ComplexMatrix(expected.cast<Complex>().asDiagonal())), 1e-15);
}

TEST(BuildPerturbation, SpectrumInvariantAcrossBases) {
  const int nq = 6;
  const double delta = 0.37;
  const PerturbationSpec computational{nq, delta, Computational{}};
  const RealVector expected = perturbation_phases(computational);
  const Spin j = Spin::for_qubits(nq);
  for (const PerturbationSpec& spec :
       {computational, PerturbationSpec{nq, delta, CoordinateBasis{jy_basis(j)}},
        PerturbationSpec{nq, delta, RandomCue{{3, 9}}}}) {
    const ComplexMatrix up = build_perturbation(spec);
    EXPECT_LT(unitarity_defect(up), 1e-10);
    EXPECT_LT(phase_multiset_distance(expected, unitary_eig(up).eigenphases), 1e-9);
  }
}

TEST(BuildPerturbation, RandomCueUsesBasisChange) {
  const EnsembleSeed seed{6, 2};
  const PerturbationSpec spec{5, 0.2, RandomCue{seed}};
  const ComplexMatrix t = sample_basis_change(32, seed);
  const ComplexMatrix d = testing::diag_phases(0.2 * collective_z_spectrum(5));
  EXPECT_LT(max_abs(build_perturbation(spec) - t * d * t.adjoint()), 1e-13);
  EXPECT_LT(max_abs(perturbation_generator(spec) -
                    t * collective_z_spectrum(5).cast<Complex>().asDiagonal() * t.adjoint()),
            1e-13);
}

TEST(BuildPerturbation, JzBasisEqualsComputational) {
  const Spin j = Spin::for_qubits(4);
  EXPECT_LT(max_abs(build_perturbation({4, 0.3, CoordinateBasis{jz_basis(j)}}) -
                    build_perturbation({4, 0.3, Computational{}})),
            1e-15);
}

TEST(BuildPerturbation, TransformValidation) {
  try {
    build_perturbation({3, 0.1, CoordinateBasis{ComplexMatrix::Identity(4, 4)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimMismatch);
  }
  try {
    build_perturbation({2, 0.1, CoordinateBasis{2.0 * ComplexMatrix::Identity(4, 4)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotUnitary);
  }
}

TEST(PerturbationGenerator, RandomMatrixSecondMoment) {
  const int nq = 8;
  const Index n = 256;
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix v = perturbation_generator({nq, 1.0, RandomCue{{40, s}}});
    sum += v.cwiseAbs2().sum() - v.diagonal().cwiseAbs2().sum();
  }
  const double mean = sum / (20.0 * n * (n - 1));
  EXPECT_NEAR(mean, spectrum_variance(nq) / n, 0.1 * spectrum_variance(nq) / n);
}

}  // namespace
}  // namespace fidlab
