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

#include "fidlab/fidelity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "fidlab/errors.hpp"

namespace fidlab {
namespace {

constexpr double kNormTol = 1e-10;
constexpr double kFitFloor = 0.02;
constexpr double kFlatTolerance = 1e-9;
constexpr double kFitFloorPerDim = 5.0;
constexpr Index kMinFitEnd = 4;

void require_same_dims(const ComplexMatrix& u, const ComplexMatrix& up, Index n) {
  if (u.rows() != u.cols() || up.rows() != up.cols() || u.rows() != up.rows() ||
      u.rows() != n) {
    throw Error(ErrorCode::kDimMismatch,
                "U, U_p and the initial state must share one dimension");
  }
}

void require_n_max(Index n_max) {
  if (n_max < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  }
}

void check_norms(const ComplexMatrix& states, Index step) {
  const double drift =
      (states.colwise().squaredNorm().array() - 1.0).abs().maxCoeff();
  if (drift > kNormTol) {
    throw Error(ErrorCode::kNormDrift, "state norm drifted by " +
                                           std::to_string(drift) + " at n = " +
                                           std::to_string(step));
  }
}

// Fills values/std from the per-state columns, reducing in column order.
void summarize(FidelityCurve& curve) {
  const Index rows = curve.per_state.rows();
  const Index cols = curve.per_state.cols();
  curve.values = RealVector::Zero(rows);
  curve.std = RealVector::Zero(rows);
  for (Index n = 0; n < rows; ++n) {
    double sum = 0.0;
    for (Index s = 0; s < cols; ++s) sum += curve.per_state(n, s);
    const double mean = sum / static_cast<double>(cols);
    double sq = 0.0;
    for (Index s = 0; s < cols; ++s) {
      const double d = curve.per_state(n, s) - mean;
      sq += d * d;
    }
    curve.values(n) = mean;
    curve.std(n) = std::sqrt(sq / static_cast<double>(cols));
  }
}

void require_power_of_two(Index n) {
  if (n < 2 || !std::has_single_bit(static_cast<std::uint64_t>(n))) {
    throw Error(ErrorCode::kDimMismatch,
                "protocol emulation needs a qubit register (N = 2^n_q)");
  }
}

// X on every qubit set in `mask`: |i> -> |i xor mask>.
StateVector flip_bits(const StateVector& v, Index mask) {
  StateVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i ^ mask) = v(i);
  return out;
}

}  // namespace

FidelityCurve fidelity_curves(const ComplexMatrix& u, const ComplexMatrix& up,
                              const ComplexMatrix& initial_states, Index n_max) {
  require_same_dims(u, up, initial_states.rows());
  require_n_max(n_max);
  if (initial_states.cols() == 0) {
    throw Error(ErrorCode::kEmptyList, "no initial states");
  }
  check_norms(initial_states, 0);

  const ComplexMatrix perturbed_map = up * u;
  ComplexMatrix plain = initial_states;
  ComplexMatrix perturbed = initial_states;
  ComplexMatrix scratch(plain.rows(), plain.cols());

  FidelityCurve curve;
  curve.per_state.resize(n_max + 1, initial_states.cols());
  curve.per_state.row(0) =
      (plain.conjugate().cwiseProduct(perturbed)).colwise().sum().cwiseAbs2();
  for (Index n = 1; n <= n_max; ++n) {
    scratch.noalias() = u * plain;
    plain.swap(scratch);
    scratch.noalias() = perturbed_map * perturbed;
    perturbed.swap(scratch);
    curve.per_state.row(n) =
        (plain.conjugate().cwiseProduct(perturbed)).colwise().sum().cwiseAbs2();
    check_norms(plain, n);
    check_norms(perturbed, n);
  }
  summarize(curve);
  return curve;
}

FidelityCurve fidelity_curve(const ComplexMatrix& u, const ComplexMatrix& up,
                             const StateVector& psi0, Index n_max) {
  return fidelity_curves(u, up, ComplexMatrix(psi0), n_max);
}

FidelityCurve basis_state_curves(const ComplexMatrix& u, const ComplexMatrix& up,
                                 std::span<const Index> indices, Index n_max) {
  const Index dim = u.rows();
  ComplexMatrix states = ComplexMatrix::Zero(dim, static_cast<Index>(indices.size()));
  for (std::size_t s = 0; s < indices.size(); ++s) {
    states.col(static_cast<Index>(s)) = basis_state(dim, indices[s]);
  }
  return fidelity_curves(u, up, states, n_max);
}

FidelityCurve echo_curve(const ComplexMatrix& u, const ComplexMatrix& up,
                         const StateVector& psi0, Index n_max) {
  require_same_dims(u, up, psi0.size());
  require_n_max(n_max);
  const ComplexMatrix perturbed_map = up * u;
  const ComplexMatrix u_adj = u.adjoint();

  FidelityCurve curve;
  curve.per_state.resize(n_max + 1, 1);
  StateVector forward = psi0;
  for (Index n = 0; n <= n_max; ++n) {
    if (n > 0) forward = perturbed_map * forward;
    StateVector echoed = forward;
    for (Index k = 0; k < n; ++k) echoed = u_adj * echoed;
    curve.per_state(n, 0) = std::norm(psi0.dot(echoed));
  }
  summarize(curve);
  return curve;
}

ProtocolRun sampled_fidelity(const ComplexMatrix& u, const ComplexMatrix& up,
                             Index prep_state_index, Index n,
                             std::uint64_t shots, EnsembleSeed seed) {
  const Index dim = u.rows();
  require_same_dims(u, up, dim);
  require_power_of_two(dim);
  if (shots < 1) throw Error(ErrorCode::kInvalidArgument, "shots must be >= 1");
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 0");
  if (prep_state_index < 0 || prep_state_index >= dim) {
    throw Error(ErrorCode::kInvalidArgument, "preparation index out of range");
  }

  const ComplexMatrix perturbed_map = up * u;
  const ComplexMatrix u_adj = u.adjoint();
  StateVector psi = flip_bits(basis_state(dim, 0), prep_state_index);
  for (Index k = 0; k < n; ++k) psi = perturbed_map * psi;
  for (Index k = 0; k < n; ++k) psi = u_adj * psi;
  psi = flip_bits(psi, prep_state_index);

  ProtocolRun run;
  run.prep_state_index = prep_state_index;
  run.shots = shots;
  run.probability = std::min(1.0, std::norm(psi(0)));
  Rng rng = make_rng(seed);
  std::bernoulli_distribution outcome(run.probability);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < shots; ++s) hits += outcome(rng) ? 1 : 0;
  const double m = static_cast<double>(shots);
  run.estimate = static_cast<double>(hits) / m;
  run.stderr_estimate = std::sqrt(run.estimate * (1.0 - run.estimate) / m);
  return run;
}

FidelityCurve shot_sample(const FidelityCurve& exact, std::uint64_t shots,
                          EnsembleSeed seed) {
  if (shots < 1) throw Error(ErrorCode::kInvalidArgument, "shots must be >= 1");
  FidelityCurve out;
  out.per_state = exact.per_state;
  const double m = static_cast<double>(shots);
  for (Index s = 0; s < out.per_state.cols(); ++s) {
    Rng rng = make_rng({seed.master_seed, seed.stream_id + static_cast<std::uint64_t>(s)});
    for (Index n = 0; n < out.per_state.rows(); ++n) {
      const double p = std::clamp(exact.per_state(n, s), 0.0, 1.0);
      std::binomial_distribution<std::uint64_t> draw(shots, p);
      out.per_state(n, s) = static_cast<double>(draw(rng)) / m;
    }
  }
  summarize(out);
  return out;
}

FidelityCurve average_curves(std::span<const FidelityCurve> curves) {
  if (curves.empty()) throw Error(ErrorCode::kEmptyList, "no curves to average");
  const Index rows = curves.front().values.size();
  FidelityCurve out;
  out.per_state.resize(rows, static_cast<Index>(curves.size()));
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (curves[c].values.size() != rows) {
      throw Error(ErrorCode::kDimMismatch, "curves differ in n_max");
    }
    out.per_state.col(static_cast<Index>(c)) = curves[c].values;
  }
  summarize(out);
  return out;
}

RateFit fit_rate(const FidelityCurve& curve, Index dim) {
  const Index n_max = curve.n_max();
  if (n_max < 1 || 1.0 - curve.values.minCoeff() < kFlatTolerance) {
    throw Error(ErrorCode::kWindowTooSmall, "curve does not decay (flat)");
  }
  const double floor =
      std::max(kFitFloorPerDim / static_cast<double>(dim), kFitFloor);
  Index end = n_max;
  for (Index n = 1; n <= n_max; ++n) {
    if (curve.values(n) < floor) {
      end = n;
      break;
    }
  }
  if (end < kMinFitEnd) {
    throw Error(ErrorCode::kWindowTooSmall,
                "decay too fast to resolve a rate (n* = " + std::to_string(end) + ")");
  }
  // A vanishing endpoint has no logarithm; drop it.
  if (!(curve.values(end) > 0.0)) --end;

  const Index count = end;
  double sx = 0.0, sy = 0.0;
  for (Index n = 1; n <= end; ++n) {
    sx += static_cast<double>(n);
    sy += std::log(curve.values(n));
  }
  const double mx = sx / static_cast<double>(count);
  const double my = sy / static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (Index n = 1; n <= end; ++n) {
    const double dx = static_cast<double>(n) - mx;
    const double dy = std::log(curve.values(n)) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (Index n = 1; n <= end; ++n) {
    const double fit = my + slope * (static_cast<double>(n) - mx);
    const double r = std::log(curve.values(n)) - fit;
    ss_res += r * r;
  }
  RateFit out;
  out.gamma_fit = -slope;
  out.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 0.0;
  out.n_lo = 1;
  out.n_hi = end;
  return out;
}

FidelityCurve theory_curve(double gamma, Index n_max, Index dim) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must be finite and >= 0");
  }
  require_n_max(n_max);
  const double plateau = 1.0 / static_cast<double>(dim);
  FidelityCurve curve;
  curve.per_state.resize(n_max + 1, 1);
  for (Index n = 0; n <= n_max; ++n) {
    curve.per_state(n, 0) =
        std::max(std::exp(-gamma * static_cast<double>(n)), plateau);
  }
  summarize(curve);
  return curve;
}

double saturation_level(const FidelityCurve& curve, double gamma, Index dim) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "saturation needs gamma > 0");
  }
  const double log_dim = std::log(static_cast<double>(dim));
  const double n_max = static_cast<double>(curve.n_max());
  if (n_max < 3.0 * log_dim / gamma) {
    throw Error(ErrorCode::kCurveTooShort,
                "curve ends before 3 ln(N)/gamma = " +
                    std::to_string(3.0 * log_dim / gamma));
  }
  const auto start = static_cast<Index>(std::ceil(2.0 * log_dim / gamma));
  double sum = 0.0;
  for (Index n = start; n <= curve.n_max(); ++n) sum += curve.values(n);
  return sum / static_cast<double>(curve.n_max() - start + 1);
}

Index saturation_onset(const FidelityCurve& curve, double plateau) {
  for (Index n = 0; n <= curve.n_max(); ++n) {
    if (curve.values(n) <= 2.0 * plateau) return n;
  }
  return curve.n_max();
}

std::vector<Index> select_initial_states(Index dim, Index count,
                                         EnsembleSeed seed) {
  if (count < 1 || count > dim) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot pick " + std::to_string(count) + " of " +
                    std::to_string(dim) + " basis states");
  }
  std::vector<Index> all(static_cast<std::size_t>(dim));
  std::iota(all.begin(), all.end(), Index{0});
  Rng rng = make_rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(count));
  return all;
}

}  // namespace fidlab
