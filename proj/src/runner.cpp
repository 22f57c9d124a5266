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

#include "fidlab/runner.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "fidlab/errors.hpp"
#include "fidlab/linalg.hpp"
#include "fidlab/models.hpp"

namespace fidlab {
namespace {

using nlohmann::json;

constexpr int kMaxRunnerQubits = 12;
constexpr Index kFallbackNMax = 100;

[[noreturn]] void config_error(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::kConfig, field + ": " + msg);
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kCue: return "cue";
    case ModelKind::kGue: return "gue";
    case ModelKind::kKickedTop: return "kicked_top";
  }
  return "?";
}

std::string_view to_string(BasisSelector basis) {
  switch (basis) {
    case BasisSelector::kComputational: return "computational";
    case BasisSelector::kJz: return "jz";
    case BasisSelector::kJy: return "jy";
    case BasisSelector::kRandomCue: return "random_cue";
  }
  return "?";
}

std::string_view to_string(InitialFrame frame) {
  return frame == InitialFrame::kRegister ? "register" : "system";
}

std::string_view to_string(CueMethod method) {
  return method == CueMethod::kQrGinibre ? "qr_ginibre" : "eigvec_of_gue";
}

template <typename Enum, std::size_t K>
Enum parse_enum(const json& value, const std::string& field,
                const std::array<Enum, K>& options) {
  if (!value.is_string()) config_error(field, "expected a string");
  const auto text = value.get<std::string>();
  std::string allowed;
  for (Enum e : options) {
    if (text == to_string(e)) return e;
    allowed += (allowed.empty() ? "" : "|") + std::string(to_string(e));
  }
  config_error(field, "unknown value '" + text + "' (expected " + allowed + ")");
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<std::string_view> known) {
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      config_error(where.empty() ? item.key() : where + "." + item.key(),
                   "unknown field");
    }
  }
}

double get_number(const json& obj, const char* key, const std::string& field) {
  const json& v = obj.at(key);
  if (!v.is_number()) config_error(field, "expected a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& obj, const char* key, const std::string& field) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) config_error(field, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t get_unsigned(const json& obj, const char* key, const std::string& field) {
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    config_error(field, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string() + ": " +
                                    std::strerror(errno));
  }
  out << content;
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string() + ": " +
                                    std::strerror(errno));
  }
}

PerturbationSpec make_spec(const ExperimentConfig& config, double delta,
                           const ComplexMatrix& frame) {
  PerturbationSpec spec{config.model.n_qubits, delta, Computational{}};
  switch (config.basis) {
    case BasisSelector::kComputational:
      break;
    case BasisSelector::kJz:
    case BasisSelector::kJy:
      spec.basis = CoordinateBasis{frame};
      break;
    case BasisSelector::kRandomCue:
      spec.basis = RandomCue{{config.master_seed, streams::kBasisChange}};
      break;
  }
  return spec;
}

ComplexMatrix build_model(const ExperimentConfig& config) {
  const ModelConfig& m = config.model;
  const Index n = config.dim();
  switch (m.kind) {
    case ModelKind::kCue:
      return sample_cue(n, {config.master_seed, streams::kModel}, m.cue_method);
    case ModelKind::kGue:
      return build_gue_propagator({m.tau, {config.master_seed, streams::kModel}}, n);
    case ModelKind::kKickedTop:
      return build_kicked_top({Spin::for_qubits(m.n_qubits), m.kick});
  }
  throw Error(ErrorCode::kConfig, "model.kind: unsupported");
}

// Eigenbasis of the perturbation; its columns are the register basis states.
ComplexMatrix perturbation_frame(const ExperimentConfig& config) {
  const Index n = config.dim();
  switch (config.basis) {
    case BasisSelector::kComputational:
    case BasisSelector::kJz:
      return jz_basis(Spin::for_qubits(config.model.n_qubits));
    case BasisSelector::kJy:
      return jy_basis(Spin::for_qubits(config.model.n_qubits));
    case BasisSelector::kRandomCue:
      return sample_basis_change(n, {config.master_seed, streams::kBasisChange});
  }
  return ComplexMatrix::Identity(n, n);
}

Index default_n_max(const ExperimentConfig& config) {
  double gamma_min = std::numeric_limits<double>::infinity();
  for (double d : config.deltas) {
    if (d > 0.0) {
      gamma_min = std::min(
          gamma_min, fgr_rate({config.model.n_qubits, d, Computational{}}).gamma);
    }
  }
  if (!std::isfinite(gamma_min)) return kFallbackNMax;
  const double n = std::log(static_cast<double>(config.dim()));
  return std::max<Index>(1, static_cast<Index>(std::ceil(3.0 * n / gamma_min)));
}

json fit_json(const LorentzianFit& f) {
  return {{"width", f.width}, {"center", f.center}, {"amplitude", f.amplitude},
          {"rss", f.rss}};
}

}  // namespace

std::string_view tool_version() { return FIDLAB_VERSION; }

void validate(const ExperimentConfig& c) {
  const ModelConfig& m = c.model;
  if (m.n_qubits < 1 || m.n_qubits > kMaxRunnerQubits) {
    config_error("model.n_qubits", "must lie in [1, 12]");
  }
  const Index n = c.dim();
  if (m.kind == ModelKind::kGue && !(std::isfinite(m.tau) && m.tau > 0.0)) {
    config_error("model.tau", "must be finite and > 0");
  }
  if (m.kind == ModelKind::kKickedTop) {
    if (!std::isfinite(m.kick)) config_error("model.k", "must be finite");
    const double expected = 0.5 * static_cast<double>(n - 1);
    if (m.spin && *m.spin != expected) {
      config_error("model.j", "must equal (2^n_qubits - 1)/2 = " + format_number(expected));
    }
  }
  for (std::size_t i = 0; i < c.deltas.size(); ++i) {
    if (!std::isfinite(c.deltas[i]) || c.deltas[i] < 0.0) {
      config_error("perturbation.deltas[" + std::to_string(i) + "]",
                   "must be finite and >= 0");
    }
  }
  if (c.n_max && *c.n_max < 1) config_error("n_max", "must be >= 1");
  if (c.n_states < 1 || c.n_states > n) {
    config_error("n_states", "must lie in [1, N = " + std::to_string(n) + "]");
  }
  if (c.shots && *c.shots < 1) config_error("shots", "must be >= 1");
  if (c.ldos_states < 0 || c.ldos_states > n) {
    config_error("analyses.ldos_states", "must lie in [0, N]");
  }
}

json config_to_json(const ExperimentConfig& c) {
  json model = {{"kind", to_string(c.model.kind)}, {"n_qubits", c.model.n_qubits}};
  if (c.model.kind == ModelKind::kCue) model["cue_method"] = to_string(c.model.cue_method);
  if (c.model.kind == ModelKind::kGue) model["tau"] = c.model.tau;
  if (c.model.kind == ModelKind::kKickedTop) {
    model["k"] = c.model.kick;
    if (c.model.spin) model["j"] = *c.model.spin;
  }
  json doc = {
      {"model", model},
      {"perturbation",
       {{"basis", to_string(c.basis)},
        {"initial_frame", to_string(c.initial_frame)},
        {"deltas", c.deltas}}},
      {"n_max", c.n_max ? json(*c.n_max) : json(nullptr)},
      {"n_states", c.n_states},
      {"shots", c.shots ? json(*c.shots) : json(nullptr)},
      {"master_seed", c.master_seed},
      {"analyses", {{"spacings", c.spacings}, {"ldos_states", c.ldos_states}}},
  };
  if (!c.recipe.empty()) doc["recipe"] = c.recipe;
  return doc;
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) config_error("<root>", "expected a JSON object");
  reject_unknown_keys(doc, "", {"recipe", "model", "perturbation", "n_max", "n_states",
                                "shots", "master_seed", "analyses"});
  ExperimentConfig c;
  if (doc.contains("recipe")) {
    if (!doc["recipe"].is_string()) config_error("recipe", "expected a string");
    c.recipe = doc["recipe"].get<std::string>();
  }
  if (!doc.contains("model") || !doc["model"].is_object()) {
    config_error("model", "required object");
  }
  const json& m = doc["model"];
  reject_unknown_keys(m, "model", {"kind", "n_qubits", "tau", "k", "j", "cue_method"});
  if (!m.contains("kind")) config_error("model.kind", "required");
  c.model.kind = parse_enum(m["kind"], "model.kind",
                            std::array{ModelKind::kCue, ModelKind::kGue,
                                       ModelKind::kKickedTop});
  if (!m.contains("n_qubits")) config_error("model.n_qubits", "required");
  c.model.n_qubits = static_cast<int>(get_integer(m, "n_qubits", "model.n_qubits"));
  if (m.contains("tau")) c.model.tau = get_number(m, "tau", "model.tau");
  if (m.contains("k")) c.model.kick = get_number(m, "k", "model.k");
  if (m.contains("j")) c.model.spin = get_number(m, "j", "model.j");
  if (m.contains("cue_method")) {
    c.model.cue_method =
        parse_enum(m["cue_method"], "model.cue_method",
                   std::array{CueMethod::kQrGinibre, CueMethod::kEigvecOfGue});
  }

  if (doc.contains("perturbation")) {
    const json& p = doc["perturbation"];
    if (!p.is_object()) config_error("perturbation", "expected an object");
    reject_unknown_keys(p, "perturbation", {"basis", "initial_frame", "deltas"});
    if (p.contains("basis")) {
      c.basis = parse_enum(p["basis"], "perturbation.basis",
                           std::array{BasisSelector::kComputational, BasisSelector::kJz,
                                      BasisSelector::kJy, BasisSelector::kRandomCue});
    }
    if (p.contains("initial_frame")) {
      c.initial_frame =
          parse_enum(p["initial_frame"], "perturbation.initial_frame",
                     std::array{InitialFrame::kRegister, InitialFrame::kSystem});
    }
    if (p.contains("deltas")) {
      if (!p["deltas"].is_array()) config_error("perturbation.deltas", "expected an array");
      for (std::size_t i = 0; i < p["deltas"].size(); ++i) {
        const json& d = p["deltas"][i];
        if (!d.is_number()) {
          config_error("perturbation.deltas[" + std::to_string(i) + "]",
                       "expected a number");
        }
        c.deltas.push_back(d.get<double>());
      }
    }
  }
  if (doc.contains("n_max") && !doc["n_max"].is_null()) {
    c.n_max = get_integer(doc, "n_max", "n_max");
  }
  if (doc.contains("n_states")) c.n_states = get_integer(doc, "n_states", "n_states");
  if (doc.contains("shots") && !doc["shots"].is_null()) {
    c.shots = get_unsigned(doc, "shots", "shots");
  }
  if (doc.contains("master_seed")) {
    c.master_seed = get_unsigned(doc, "master_seed", "master_seed");
  }
  if (doc.contains("analyses")) {
    const json& a = doc["analyses"];
    if (!a.is_object()) config_error("analyses", "expected an object");
    reject_unknown_keys(a, "analyses", {"spacings", "ldos_states"});
    if (a.contains("spacings")) {
      if (!a["spacings"].is_boolean()) config_error("analyses.spacings", "expected a boolean");
      c.spacings = a["spacings"].get<bool>();
    }
    if (a.contains("ldos_states")) {
      c.ldos_states = get_integer(a, "ldos_states", "analyses.ldos_states");
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfig, "cannot read config " + path.string() + ": " +
                                        std::strerror(errno));
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

std::vector<std::string> recipe_names() {
  return {"fig1", "fig2", "fig2-inset", "fig3", "fig3-inset"};
}

ExperimentConfig recipe(std::string_view name) {
  ExperimentConfig c;
  c.recipe = std::string(name);
  c.model.n_qubits = 10;
  c.n_states = 50;
  if (name == "fig1") {
    c.model.kind = ModelKind::kCue;
    c.deltas = {0.1, 0.2, 0.4};
    c.spacings = true;
  } else if (name == "fig2") {
    c.model.kind = ModelKind::kGue;
    c.model.tau = 100.0;
    c.deltas = {0.3};
    c.spacings = true;
  } else if (name == "fig2-inset") {
    c.model.kind = ModelKind::kGue;
    c.model.tau = 100.0;
    c.spacings = true;
  } else if (name == "fig3") {
    c.model.kind = ModelKind::kKickedTop;
    c.model.kick = 12.0;
    c.basis = BasisSelector::kJz;
    c.deltas = {0.1, 0.3};
    c.spacings = true;
  } else if (name == "fig3-inset") {
    c.model.kind = ModelKind::kKickedTop;
    c.model.kick = 1.0;
    c.basis = BasisSelector::kRandomCue;
    c.deltas = {0.1, 0.3};
  } else {
    std::string known;
    for (const auto& r : recipe_names()) known += (known.empty() ? "" : "|") + r;
    config_error("recipe", "unknown recipe '" + std::string(name) + "' (expected " +
                               known + ")");
  }
  return c;
}

ExperimentReport run(const ExperimentConfig& config) {
  validate(config);
  ExperimentReport report;
  report.config = config;
  report.dim = config.dim();
  report.n_max = config.n_max.value_or(default_n_max(config));
  report.timestamp = utc_timestamp();

  const Index n = report.dim;
  const ComplexMatrix u = build_model(config);
  const ComplexMatrix frame = perturbation_frame(config);

  report.initial_states = select_initial_states(
      n, config.n_states, {config.master_seed, streams::kInitialStates});
  ComplexMatrix states = ComplexMatrix::Zero(n, config.n_states);
  for (Index s = 0; s < config.n_states; ++s) {
    const Index idx = report.initial_states[static_cast<std::size_t>(s)];
    if (config.initial_frame == InitialFrame::kRegister) {
      states.col(s) = frame.col(idx);
    } else {
      states(idx, s) = 1.0;
    }
  }

  std::optional<UnitaryEigen> unperturbed;
  if (config.ldos_states > 0) unperturbed = unitary_eig(u);

  for (std::size_t d = 0; d < config.deltas.size(); ++d) {
    DeltaResult r;
    r.delta = config.deltas[d];
    const PerturbationSpec spec = make_spec(config, r.delta, frame);
    r.prediction = fgr_rate(spec);
    const ComplexMatrix up = build_perturbation(spec);
    r.curve = fidelity_curves(u, up, states, report.n_max);
    if (config.shots) {
      r.curve = shot_sample(
          r.curve, *config.shots,
          {config.master_seed, streams::kShots + (static_cast<std::uint64_t>(d) << 20)});
    }
    r.theory = theory_curve(r.prediction.gamma, report.n_max, n);
    try {
      r.fit = fit_rate(r.curve, n);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kWindowTooSmall) throw;
      r.fit_error = e.what();
    }
    if (unperturbed) {
      const UnitaryEigen perturbed = unitary_eig(up * u);
      LdosSummary summary;
      summary.predicted_width =
          kTwoPi * r.prediction.sigma2 / r.prediction.delta_level;
      std::vector<LdosProfile> profiles;
      for (Index k = 0; k < config.ldos_states; ++k) {
        const Index idx = k * n / config.ldos_states;
        summary.eigenstates.push_back(idx);
        profiles.push_back(ldos(*unperturbed, perturbed, idx));
      }
      try {
        summary.fit = lorentzian_fit(pooled_ldos(profiles));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kFitDiverged) throw;
        summary.fit_error = e.what();
      }
      r.ldos = std::move(summary);
    }
    report.results.push_back(std::move(r));
  }

  if (config.spacings) {
    SpacingSummary s;
    s.by_sector = config.model.kind == ModelKind::kKickedTop;
    s.histogram = s.by_sector
                      ? nn_spacings_by_sector(
                            u, kicked_top_symmetry(Spin::for_qubits(config.model.n_qubits)))
                      : nn_spacings(u);
    s.ks_poisson = ks_distance(s.histogram, SpacingModel::kPoisson);
    s.ks_wigner = ks_distance(s.histogram, SpacingModel::kWignerGue);
    report.spacings = std::move(s);
  }
  return report;
}

json report_to_json(const ExperimentReport& report) {
  json results = json::array();
  for (const auto& r : report.results) {
    json item = {
        {"delta", r.delta},
        {"prediction",
         {{"gamma", r.prediction.gamma},
          {"sigma2", r.prediction.sigma2},
          {"delta_level", r.prediction.delta_level},
          {"lambda_var", r.prediction.lambda_var}}},
        {"fit", nullptr},
    };
    if (r.fit) {
      item["fit"] = {{"gamma_fit", r.fit->gamma_fit},
                     {"r2", r.fit->r2},
                     {"window", {r.fit->n_lo, r.fit->n_hi}}};
    } else {
      item["fit_error"] = r.fit_error;
    }
    if (r.ldos) {
      json l = {{"eigenstates", r.ldos->eigenstates},
                {"predicted_width", r.ldos->predicted_width},
                {"fit", r.ldos->fit ? fit_json(*r.ldos->fit) : json(nullptr)}};
      if (!r.ldos->fit) l["fit_error"] = r.ldos->fit_error;
      item["ldos"] = std::move(l);
    }
    results.push_back(std::move(item));
  }
  json doc = {
      {"tool", {{"name", "fidlab"}, {"version", tool_version()}}},
      {"config", config_to_json(report.config)},
      {"seeds",
       {{"master_seed", report.config.master_seed},
        {"streams",
         {{"model", streams::kModel},
          {"basis_change", streams::kBasisChange},
          {"initial_states", streams::kInitialStates},
          {"shots", streams::kShots}}}}},
      {"dim", report.dim},
      {"n_max", report.n_max},
      {"initial_states", report.initial_states},
      {"results", results},
      {"spacings", nullptr},
      {"meta", {{"timestamp", report.timestamp}}},
  };
  if (report.spacings) {
    doc["spacings"] = {{"n_levels", report.spacings->histogram.n_levels},
                       {"by_sector", report.spacings->by_sector},
                       {"ks_poisson", report.spacings->ks_poisson},
                       {"ks_wigner_gue", report.spacings->ks_wigner}};
  }
  return doc;
}

void emit(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  }

  std::ostringstream curves;
  curves << "delta,n,o_mean,o_std,o_theory\n";
  for (const auto& r : report.results) {
    const std::string delta = format_number(r.delta);
    for (Index n = 0; n < r.curve.values.size(); ++n) {
      curves << delta << ',' << n << ',' << format_number(r.curve.values(n)) << ','
             << format_number(r.curve.std(n)) << ','
             << format_number(r.theory.values(n)) << '\n';
    }
  }
  write_file(out_dir / "curves.csv", curves.str());

  std::ostringstream spacings;
  spacings << "s,count,poisson_pdf,wigner_pdf\n";
  if (report.spacings) {
    const auto& h = report.spacings->histogram;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      const double s = 0.5 * (h.edges(static_cast<Index>(b)) +
                              h.edges(static_cast<Index>(b) + 1));
      spacings << format_number(s) << ',' << h.counts[b] << ','
               << format_number(reference_pdf(SpacingModel::kPoisson, s)) << ','
               << format_number(reference_pdf(SpacingModel::kWignerGue, s)) << '\n';
    }
  }
  write_file(out_dir / "spacings.csv", spacings.str());

  write_file(out_dir / "report.json", report_to_json(report).dump(2) + "\n");
}

}  // namespace fidlab
