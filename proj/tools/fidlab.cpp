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

// Command-line front end: runs a config or a built-in recipe and writes
// curves.csv, spacings.csv and report.json.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fidlab/errors.hpp"
#include "fidlab/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::vector<double> deltas;
  std::optional<fidlab::Index> n_max;
  std::optional<fidlab::Index> n_states;
  std::optional<std::uint64_t> shots;
  std::optional<double> tau;
  std::optional<double> kick;
  std::optional<int> n_qubits;
  std::optional<fidlab::Index> ldos_states;
  bool spacings = false;
};

void apply(const Overrides& o, fidlab::ExperimentConfig& c) {
  if (o.seed) c.master_seed = *o.seed;
  if (!o.deltas.empty()) c.deltas = o.deltas;
  if (o.n_max) c.n_max = *o.n_max;
  if (o.n_states) c.n_states = *o.n_states;
  if (o.shots) c.shots = *o.shots;
  if (o.tau) c.model.tau = *o.tau;
  if (o.kick) c.model.kick = *o.kick;
  if (o.n_qubits) c.model.n_qubits = *o.n_qubits;
  if (o.ldos_states) c.ldos_states = *o.ldos_states;
  if (o.spacings) c.spacings = true;
}

void summarize(const fidlab::ExperimentReport& report) {
  std::cout << "N=" << report.dim << " n_max=" << report.n_max
            << " states=" << report.initial_states.size() << '\n';
  for (const auto& r : report.results) {
    std::cout << "delta=" << r.delta << " gamma_fgr=" << r.prediction.gamma;
    if (r.fit) {
      std::cout << " gamma_fit=" << r.fit->gamma_fit << " r2=" << r.fit->r2 << " window=["
                << r.fit->n_lo << ',' << r.fit->n_hi << ']';
    } else {
      std::cout << " fit: " << r.fit_error;
    }
    if (r.ldos && r.ldos->fit) {
      std::cout << " ldos_width=" << r.ldos->fit->width
                << " predicted=" << r.ldos->predicted_width;
    }
    std::cout << '\n';
  }
  if (report.spacings) {
    std::cout << "spacings: levels=" << report.spacings->histogram.n_levels
              << " ks_poisson=" << report.spacings->ks_poisson
              << " ks_wigner_gue=" << report.spacings->ks_wigner << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fidelity decay experiments on random-matrix and kicked-top maps", "fidlab"};
  app.set_version_flag("--version", std::string(fidlab::tool_version()));

  std::string config_path;
  std::string recipe_name;
  std::string out_dir = "out";
  bool quiet = false;
  Overrides o;

  auto* config_opt = app.add_option("--config", config_path, "JSON config file")
                         ->check(CLI::ExistingFile);
  app.add_option("--recipe", recipe_name, "Built-in config")
      ->check(CLI::IsMember(fidlab::recipe_names()))
      ->excludes(config_opt);
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--delta", o.deltas, "Perturbation strengths (replaces the list)");
  app.add_option("--n-max", o.n_max, "Number of map iterations");
  app.add_option("--n-states", o.n_states, "Number of initial basis states");
  app.add_option("--shots", o.shots, "Shot-sample each curve with M measurements");
  app.add_option("--tau", o.tau, "GUE propagator time");
  app.add_option("--kick", o.kick, "Kicked-top kick strength k");
  app.add_option("--n-qubits", o.n_qubits, "Register size");
  app.add_option("--ldos-states", o.ldos_states, "Eigenstates in the pooled LDOS fit");
  app.add_flag("--spacings", o.spacings, "Compute level-spacing statistics");
  app.add_flag("-q,--quiet", quiet, "Suppress the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    fidlab::ExperimentConfig config;
    if (!config_path.empty()) {
      config = fidlab::load_config(config_path);
    } else if (!recipe_name.empty()) {
      config = fidlab::recipe(recipe_name);
    } else {
      std::cerr << "error: one of --config or --recipe is required\n";
      return kExitConfig;
    }
    apply(o, config);
    fidlab::validate(config);

    const fidlab::ExperimentReport report = fidlab::run(config);
    fidlab::emit(report, out_dir);
    if (!quiet) summarize(report);
    return kExitOk;
  } catch (const fidlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case fidlab::ErrorCode::kConfig:
        return kExitConfig;
      case fidlab::ErrorCode::kIo:
        return kExitIo;
      default:
        return kExitNumerical;
    }
  }
}
