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

#ifndef FIDLAB_TESTS_TEST_UTIL_HPP
#define FIDLAB_TESTS_TEST_UTIL_HPP

#include <algorithm>
#include <vector>

#include "fidlab/linalg.hpp"

namespace fidlab::testing {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

inline ComplexMatrix diag_phases(const RealVector& theta) {
  const Complex i(0.0, 1.0);
  return (-i * theta.cast<Complex>()).array().exp().matrix().asDiagonal();
}

/// Largest circular mismatch between two phase multisets. Both are rotated so
/// the widest gap of `a` straddles zero, then compared in sorted order.
inline double phase_multiset_distance(RealVector a, RealVector b) {
  std::sort(a.begin(), a.end());
  double cut = 0.5 * (a(a.size() - 1) + a(0) + kTwoPi);
  double widest = a(0) + kTwoPi - a(a.size() - 1);
  for (Index k = 1; k < a.size(); ++k) {
    if (a(k) - a(k - 1) > widest) {
      widest = a(k) - a(k - 1);
      cut = 0.5 * (a(k) + a(k - 1));
    }
  }
  for (auto* v : {&a, &b}) {
    for (double& x : *v) x = wrap_phase(x - cut);
    std::sort(v->begin(), v->end());
  }
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace fidlab::testing

#endif  // FIDLAB_TESTS_TEST_UTIL_HPP
