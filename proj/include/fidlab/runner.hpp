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

#ifndef FIDLAB_RUNNER_HPP
#define FIDLAB_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fidlab/ensembles.hpp"
#include "fidlab/fidelity.hpp"
#include "fidlab/perturbations.hpp"
#include "fidlab/spectral.hpp"
#include "json.hpp"

namespace fidlab {

enum class ModelKind { kCue, kGue, kKickedTop };
enum class BasisSelector { kComputational, kJz, kJy, kRandomCue };

/// Where the initial computational basis states live. kRegister prepares them
/// in the qubit register, i.e. as eigenstates of the perturbation (column i
/// of its eigenbasis); kSystem uses the unit vectors of the matrix
/// representation of U. The two agree for the computational and J_z bases.
enum class InitialFrame { kRegister, kSystem };

struct ModelConfig {
  ModelKind kind = ModelKind::kCue;
  int n_qubits = 10;
  double tau = 0.0;           // gue only
  double kick = 0.0;          // kicked_top only
  std::optional<double> spin; // kicked_top only; must be (2^n_q - 1)/2
  CueMethod cue_method = CueMethod::kQrGinibre;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct ExperimentConfig {
  std::string recipe;  // empty for hand-written configs
  ModelConfig model;
  BasisSelector basis = BasisSelector::kComputational;
  InitialFrame initial_frame = InitialFrame::kRegister;
  std::vector<double> deltas;
  std::optional<Index> n_max;  // default ceil(3 ln N / gamma_min)
  Index n_states = 50;
  std::optional<std::uint64_t> shots;
  std::uint64_t master_seed = 1;
  bool spacings = false;
  Index ldos_states = 0;

  Index dim() const { return Index{1} << model.n_qubits; }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Stream ids derived from the master seed; recorded in report.json.
namespace streams {
inline constexpr std::uint64_t kModel = 1;
inline constexpr std::uint64_t kBasisChange = 2;
inline constexpr std::uint64_t kInitialStates = 3;
/// Shot sampling for delta index d and state s uses kShots + (d << 20) + s.
inline constexpr std::uint64_t kShots = std::uint64_t{1} << 32;
}  // namespace streams

struct SpacingSummary {
  SpacingHistogram histogram;
  double ks_poisson = 0.0;
  double ks_wigner = 0.0;
  bool by_sector = false;
};

struct LdosSummary {
  std::vector<Index> eigenstates;
  std::optional<LorentzianFit> fit;  // fit of the eigenstate-averaged LDOS
  std::string fit_error;
  double predicted_width = 0.0;      // 2 pi sigma^2 / Delta
};

struct DeltaResult {
  double delta = 0.0;
  FgrPrediction prediction;
  FidelityCurve curve;
  FidelityCurve theory;
  std::optional<RateFit> fit;
  std::string fit_error;
  std::optional<LdosSummary> ldos;
};

struct ExperimentReport {
  ExperimentConfig config;
  Index dim = 0;
  Index n_max = 0;
  std::vector<Index> initial_states;
  std::vector<DeltaResult> results;
  std::optional<SpacingSummary> spacings;
  std::string timestamp;
};

/// Throws Error(kConfig) naming the offending field.
void validate(const ExperimentConfig& config);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Built-in configs: fig1, fig2, fig2-inset, fig3, fig3-inset.
ExperimentConfig recipe(std::string_view name);
std::vector<std::string> recipe_names();

ExperimentReport run(const ExperimentConfig& config);

nlohmann::json report_to_json(const ExperimentReport& report);

/// Writes curves.csv, spacings.csv and report.json into out_dir.
void emit(const ExperimentReport& report, const std::filesystem::path& out_dir);

std::string_view tool_version();

}  // namespace fidlab

#endif  // FIDLAB_RUNNER_HPP
