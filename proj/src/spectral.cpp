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

#include "fidlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "fidlab/errors.hpp"

namespace fidlab {
namespace {

constexpr Index kMinLevels = 50;
constexpr Index kMinLdosWeights = 32;

// Signed angle in (-pi, pi].
double wrap_signed(double x) {
  double r = wrap_phase(x);
  if (r > std::numbers::pi) r -= kTwoPi;
  return r;
}

// Residuals of a bin-integrated Lorentzian against binned LDOS masses.
// Parameters: (log amplitude, center, log width).
constexpr double kSectorPhaseTol = 1e-6;

struct BinnedLorentzian {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  Eigen::VectorXd mass;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(mass.size()); }

  static double bin_mass(double amp, double c, double width, double a, double b) {
    const double half = 0.5 * width;
    return amp / std::numbers::pi *
           (std::atan((b - c) / half) - std::atan((a - c) / half));
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    const double amp = std::exp(x(0));
    const double width = std::exp(x(2));
    for (Index b = 0; b < mass.size(); ++b) {
      fvec(b) = bin_mass(amp, x(1), width, lo(b), hi(b)) - mass(b);
    }
    return 0;
  }
};

// Unfolded circular spacings of one spectrum, appended to `out`.
void append_spacings(const RealVector& phases, std::vector<double>& out) {
  const Index n = phases.size();
  if (n < 2) {
    throw Error(ErrorCode::kTooFewLevels, "need at least two eigenphases");
  }
  std::vector<double> sorted(phases.data(), phases.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const double scale = static_cast<double>(n) / kTwoPi;
  for (Index i = 0; i + 1 < n; ++i) {
    out.push_back(scale * (sorted[i + 1] - sorted[i]));
  }
  out.push_back(scale * (sorted.front() + kTwoPi - sorted.back()));
}

SpacingHistogram histogram_of(std::vector<double> spacings) {
  std::sort(spacings.begin(), spacings.end());
  SpacingHistogram h;
  h.n_levels = static_cast<Index>(spacings.size());
  h.spacings = Eigen::Map<const RealVector>(spacings.data(), h.n_levels);
  h.edges = RealVector::LinSpaced(kHistogramBins + 1, 0.0, kHistogramMax);
  h.counts.assign(kHistogramBins, 0);
  const double bin_width = kHistogramMax / kHistogramBins;
  for (double s : h.spacings) {
    const auto b = static_cast<Index>(std::floor(s / bin_width));
    if (b >= 0 && b < kHistogramBins) ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

}  // namespace

SpacingHistogram spacings_from_phases(const RealVector& phases) {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(phases.size()));
  append_spacings(phases, s);
  return histogram_of(std::move(s));
}

SpacingHistogram nn_spacings(const ComplexMatrix& u) {
  return spacings_from_phases(unitary_eig(u).eigenphases);
}

SpacingHistogram nn_spacings_by_sector(const ComplexMatrix& u,
                                       const ComplexMatrix& symmetry) {
  if (u.rows() != symmetry.rows() || u.cols() != symmetry.cols()) {
    throw Error(ErrorCode::kDimMismatch, "U and the symmetry differ in dimension");
  }
  const UnitaryEigen sym = unitary_eig(symmetry);
  const RealVector& phi = sym.eigenphases;
  const Index n = phi.size();
  auto gap_before = [&](Index k) {
    return wrap_phase(phi(k) - phi((k + n - 1) % n));
  };

  // Start the walk at a sector boundary so no sector straddles the seam.
  Index first = 0;
  for (Index k = 0; k < n; ++k) {
    if (gap_before(k) >= kSectorPhaseTol) {
      first = k;
      break;
    }
  }

  std::vector<double> spacings;
  spacings.reserve(static_cast<std::size_t>(n));
  std::vector<Index> members{first};
  auto flush = [&] {
    ComplexMatrix basis(n, static_cast<Index>(members.size()));
    for (std::size_t c = 0; c < members.size(); ++c) {
      basis.col(static_cast<Index>(c)) = sym.vectors.col(members[c]);
    }
    const ComplexMatrix block = basis.adjoint() * u * basis;
    append_spacings(unitary_eig(block).eigenphases, spacings);
    members.clear();
  };
  for (Index step = 1; step < n; ++step) {
    const Index k = (first + step) % n;
    if (gap_before(k) >= kSectorPhaseTol) flush();
    members.push_back(k);
  }
  flush();
  return histogram_of(std::move(spacings));
}

double reference_pdf(SpacingModel model, double s) {
  if (s < 0.0) return 0.0;
  switch (model) {
    case SpacingModel::kPoisson:
      return std::exp(-s);
    case SpacingModel::kWignerGue: {
      constexpr double pi = std::numbers::pi;
      return 32.0 / (pi * pi) * s * s * std::exp(-4.0 * s * s / pi);
    }
  }
  return 0.0;
}

double reference_cdf(SpacingModel model, double s) {
  if (s <= 0.0) return 0.0;
  switch (model) {
    case SpacingModel::kPoisson:
      return -std::expm1(-s);
    case SpacingModel::kWignerGue: {
      constexpr double pi = std::numbers::pi;
      return std::erf(2.0 * s / std::sqrt(pi)) -
             4.0 * s / pi * std::exp(-4.0 * s * s / pi);
    }
  }
  return 0.0;
}

double ks_distance(const SpacingHistogram& h, SpacingModel model) {
  const Index n = h.spacings.size();
  if (n < kMinLevels) {
    throw Error(ErrorCode::kTooFewLevels,
                "KS distance needs >= 50 spacings, got " + std::to_string(n));
  }
  const double m = static_cast<double>(n);
  double d = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double f = reference_cdf(model, h.spacings(i));
    d = std::max({d, static_cast<double>(i + 1) / m - f,
                  f - static_cast<double>(i) / m});
  }
  return d;
}

LdosProfile ldos(const UnitaryEigen& unperturbed, const UnitaryEigen& perturbed,
                 Index eigenstate_index) {
  const Index n = unperturbed.eigenphases.size();
  if (perturbed.eigenphases.size() != n) {
    throw Error(ErrorCode::kDimMismatch, "decompositions differ in dimension");
  }
  if (eigenstate_index < 0 || eigenstate_index >= n) {
    throw Error(ErrorCode::kInvalidArgument, "eigenstate index out of range");
  }
  LdosProfile p;
  p.center_phase = unperturbed.eigenphases(eigenstate_index);
  p.phases = perturbed.eigenphases;
  p.weights = (perturbed.vectors.adjoint() * unperturbed.vectors.col(eigenstate_index))
                  .cwiseAbs2();
  p.dim = n;
  return p;
}

LdosProfile ldos(const ComplexMatrix& u, const ComplexMatrix& up,
                 Index eigenstate_index) {
  if (u.rows() != up.rows() || u.cols() != up.cols()) {
    throw Error(ErrorCode::kDimMismatch, "U and U_p differ in dimension");
  }
  return ldos(unitary_eig(u), unitary_eig(up * u), eigenstate_index);
}

LdosProfile pooled_ldos(std::span<const LdosProfile> profiles) {
  if (profiles.empty()) throw Error(ErrorCode::kEmptyList, "no LDOS profiles");
  Index total = 0;
  for (const auto& p : profiles) {
    if (p.dim != profiles.front().dim || p.weights.size() != p.phases.size()) {
      throw Error(ErrorCode::kDimMismatch, "LDOS profiles are inconsistent");
    }
    total += p.weights.size();
  }
  const double scale = 1.0 / static_cast<double>(profiles.size());
  LdosProfile out;
  out.dim = profiles.front().dim;
  out.weights.resize(total);
  out.phases.resize(total);
  Index k = 0;
  for (const auto& p : profiles) {
    for (Index m = 0; m < p.weights.size(); ++m, ++k) {
      out.weights(k) = scale * p.weights(m);
      out.phases(k) = wrap_phase(p.phases(m) - p.center_phase);
    }
  }
  return out;
}

LorentzianFit lorentzian_fit(const LdosProfile& p, int aggregation) {
  const Index n = p.dim > 0 ? p.dim : p.weights.size();
  if (p.weights.size() < kMinLdosWeights || p.phases.size() != p.weights.size()) {
    throw Error(ErrorCode::kTooFewLevels, "Lorentzian fit needs >= 32 weights");
  }
  if (aggregation < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bin aggregation must be >= 1");
  }
  const double bin = aggregation * kTwoPi / static_cast<double>(n);
  const auto half_bins = static_cast<Index>(std::floor(std::numbers::pi / bin + 0.5));
  const Index bins = 2 * half_bins + 1;

  BinnedLorentzian f;
  f.lo.resize(bins);
  f.hi.resize(bins);
  f.mass = Eigen::VectorXd::Zero(bins);
  for (Index b = 0; b < bins; ++b) {
    f.lo(b) = (static_cast<double>(b - half_bins) - 0.5) * bin;
    f.hi(b) = f.lo(b) + bin;
  }
  for (Index m = 0; m < p.weights.size(); ++m) {
    const double x = wrap_signed(p.center_phase - p.phases(m));
    const auto b = static_cast<Index>(std::floor(x / bin + 0.5)) + half_bins;
    f.mass(std::clamp<Index>(b, 0, bins - 1)) += p.weights(m);
  }

  // Start from the width that puts the observed mass fraction in the
  // central bin.
  const double total = f.mass.sum();
  const double central = std::clamp(f.mass(half_bins) / total, 1e-3, 0.999);
  const double width0 = bin / std::tan(0.5 * std::numbers::pi * central);

  Eigen::VectorXd x(3);
  x << std::log(total), 0.0, std::log(width0);
  Eigen::NumericalDiff<BinnedLorentzian> diff(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<BinnedLorentzian>> lm(diff);
  const auto status = lm.minimize(x);

  LorentzianFit fit;
  fit.amplitude = std::exp(x(0));
  fit.center = x(1);
  fit.width = std::exp(x(2));
  Eigen::VectorXd resid(bins);
  f(x, resid);
  fit.rss = resid.squaredNorm();
  const bool ok = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall;
  if (!ok || !std::isfinite(fit.width) || !std::isfinite(fit.center) ||
      fit.width <= 0.0 || fit.width > kTwoPi) {
    throw Error(ErrorCode::kFitDiverged,
                "Lorentzian fit did not converge (status " +
                    std::to_string(static_cast<int>(status)) + ")");
  }
  return fit;
}

FidelityCurve fidelity_from_ldos(const LdosProfile& p, Index n_max) {
  if (n_max < 1) throw Error(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  const Index m = p.weights.size();
  FidelityCurve curve;
  curve.per_state.resize(n_max + 1, 1);
  for (Index n = 0; n <= n_max; ++n) {
    Complex sum = 0.0;
    for (Index k = 0; k < m; ++k) {
      sum += p.weights(k) *
             std::polar(1.0, -(p.center_phase - p.phases(k)) * static_cast<double>(n));
    }
    curve.per_state(n, 0) = std::norm(sum);
  }
  curve.values = curve.per_state.col(0);
  curve.std = RealVector::Zero(n_max + 1);
  return curve;
}

}  // namespace fidlab
