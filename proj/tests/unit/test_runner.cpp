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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "fidlab/errors.hpp"
#include "fidlab/runner.hpp"

namespace fidlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fidlab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.model.kind = ModelKind::kCue;
  c.model.n_qubits = 6;
  c.deltas = {0.3, 0.5};
  c.n_states = 8;
  c.master_seed = 42;
  c.spacings = true;
  c.ldos_states = 4;
  return c;
}

ErrorCode code_of(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

std::string message_of(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(Config, RoundTripAllRecipes) {
  for (const auto& name : recipe_names()) {
    const ExperimentConfig c = recipe(name);
    EXPECT_EQ(config_from_json(config_to_json(c)), c) << name;
  }
}

TEST(Config, RoundTripOptionalFields) {
  ExperimentConfig c = small_config();
  c.model.kind = ModelKind::kKickedTop;
  c.model.kick = 12.0;
  c.model.spin = 31.5;
  c.basis = BasisSelector::kJy;
  c.initial_frame = InitialFrame::kSystem;
  c.n_max = 77;
  c.shots = 4096;
  c.master_seed = 18446744073709551615ull;
  const json doc = json::parse(config_to_json(c).dump());
  EXPECT_EQ(config_from_json(doc), c);
}

TEST(Config, FieldLevelErrors) {
  json good = config_to_json(small_config());
  json bad = good;
  bad["shotz"] = 3;
  EXPECT_EQ(code_of(bad), ErrorCode::kConfig);
  EXPECT_NE(message_of(bad).find("shotz"), std::string::npos);

  bad = good;
  bad["model"]["kind"] = "coe";
  EXPECT_NE(message_of(bad).find("model.kind"), std::string::npos);

  bad = good;
  bad["perturbation"]["deltas"] = {0.1, -0.2};
  EXPECT_NE(message_of(bad).find("perturbation.deltas[1]"), std::string::npos);

  bad = good;
  bad["model"]["n_qubits"] = 13;
  EXPECT_NE(message_of(bad).find("model.n_qubits"), std::string::npos);

  bad = good;
  bad["n_states"] = 65;
  EXPECT_NE(message_of(bad).find("n_states"), std::string::npos);

  bad = good;
  bad["master_seed"] = -1;
  EXPECT_NE(message_of(bad).find("master_seed"), std::string::npos);

  bad = good;
  bad["model"] = {{"kind", "kicked_top"}, {"n_qubits", 4}, {"k", 1.0}, {"j", 8.0}};
  EXPECT_NE(message_of(bad).find("model.j"), std::string::npos);

  bad = good;
  bad["model"] = {{"kind", "gue"}, {"n_qubits", 4}};
  EXPECT_NE(message_of(bad).find("model.tau"), std::string::npos);

  EXPECT_EQ(code_of(json::array()), ErrorCode::kConfig);
}

TEST(Config, UnknownRecipe) {
  EXPECT_THROW(recipe("fig4"), Error);
}

TEST(Config, LoadFromFile) {
  const fs::path dir = scratch_dir("load");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << config_to_json(small_config()).dump();
  EXPECT_EQ(load_config(dir / "c.json"), small_config());
  std::ofstream(dir / "broken.json") << "{\"model\": ";
  EXPECT_THROW(load_config(dir / "broken.json"), Error);
  EXPECT_THROW(load_config(dir / "missing.json"), Error);
}

TEST(Recipes, PinnedGrids) {
  const auto fig1 = recipe("fig1");
  EXPECT_EQ(fig1.model.kind, ModelKind::kCue);
  EXPECT_EQ(fig1.dim(), 1024);
  EXPECT_EQ(fig1.n_states, 50);
  EXPECT_EQ(fig1.deltas, (std::vector<double>{0.1, 0.2, 0.4}));
  const auto inset = recipe("fig3-inset");
  EXPECT_EQ(inset.model.kind, ModelKind::kKickedTop);
  EXPECT_EQ(inset.model.kick, 1.0);
  EXPECT_EQ(inset.basis, BasisSelector::kRandomCue);
  EXPECT_EQ(inset.deltas, (std::vector<double>{0.1, 0.3}));
}

TEST(Run, ReportContents) {
  const auto report = run(small_config());
  EXPECT_EQ(report.dim, 64);
  // Default n_max reaches the plateau of the slowest curve.
  const double gamma_min = 0.3 * 0.3 * 6 / 4.0;
  EXPECT_EQ(report.n_max, static_cast<Index>(std::ceil(3.0 * std::log(64.0) / gamma_min)));
  ASSERT_EQ(report.results.size(), 2u);
  for (const auto& r : report.results) {
    EXPECT_EQ(r.curve.n_max(), report.n_max);
    EXPECT_EQ(r.curve.per_state.cols(), 8);
    EXPECT_TRUE(r.fit.has_value()) << r.fit_error;
    ASSERT_TRUE(r.ldos.has_value());
    EXPECT_EQ(r.ldos->eigenstates.size(), 4u);
  }
  ASSERT_TRUE(report.spacings.has_value());
  EXPECT_EQ(report.spacings->histogram.n_levels, 64);
  EXPECT_FALSE(report.timestamp.empty());
}

TEST(Run, ZeroDeltaIsFlat) {
  ExperimentConfig c = small_config();
  c.deltas = {0.0};
  c.ldos_states = 0;
  const auto report = run(c);
  EXPECT_EQ(report.n_max, 100);
  const auto& r = report.results.front();
  EXPECT_LT((r.curve.values.array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_FALSE(r.fit.has_value());
  EXPECT_NE(r.fit_error.find("flat"), std::string::npos);
}

TEST(Run, ShotSampledCurvesAreDeterministic) {
  ExperimentConfig c = small_config();
  c.shots = 256;
  c.ldos_states = 0;
  const auto a = run(c);
  const auto b = run(c);
  EXPECT_EQ(a.results[0].curve.per_state, b.results[0].curve.per_state);
  c.master_seed = 43;
  EXPECT_NE(run(c).results[0].curve.per_state, a.results[0].curve.per_state);
}

TEST(Run, InitialFramesAgreeForComputationalBasis) {
  ExperimentConfig c = small_config();
  c.ldos_states = 0;
  c.spacings = false;
  const auto reg = run(c);
  c.initial_frame = InitialFrame::kSystem;
  const auto sys = run(c);
  EXPECT_EQ(reg.results[0].curve.values, sys.results[0].curve.values);
}

TEST(Emit, FilesAndDeterminism) {
  const auto dir_a = scratch_dir("emit_a");
  const auto dir_b = scratch_dir("emit_b");
  const auto report = run(small_config());
  emit(report, dir_a);
  emit(run(small_config()), dir_b);

  const auto curves = lines(slurp(dir_a / "curves.csv"));
  ASSERT_FALSE(curves.empty());
  EXPECT_EQ(curves.front(), "delta,n,o_mean,o_std,o_theory");
  EXPECT_EQ(curves.size(), 1 + 2 * static_cast<std::size_t>(report.n_max + 1));
  EXPECT_EQ(lines(slurp(dir_a / "spacings.csv")).front(), "s,count,poisson_pdf,wigner_pdf");
  EXPECT_EQ(lines(slurp(dir_a / "spacings.csv")).size(), 1u + kHistogramBins);
  EXPECT_EQ(slurp(dir_a / "curves.csv"), slurp(dir_b / "curves.csv"));
  EXPECT_EQ(slurp(dir_a / "spacings.csv"), slurp(dir_b / "spacings.csv"));

  json ja = json::parse(slurp(dir_a / "report.json"));
  json jb = json::parse(slurp(dir_b / "report.json"));
  EXPECT_EQ(ja["tool"]["version"], std::string(tool_version()));
  EXPECT_EQ(ja["seeds"]["master_seed"], 42);
  EXPECT_TRUE(ja["results"][0]["fit"].contains("gamma_fit"));
  EXPECT_TRUE(ja["results"][0]["fit"].contains("window"));
  EXPECT_EQ(config_from_json(ja["config"]), small_config());
  ja["meta"].erase("timestamp");
  jb["meta"].erase("timestamp");
  EXPECT_EQ(ja.dump(2), jb.dump(2));
}

TEST(Emit, EmptyReport) {
  const auto dir = scratch_dir("emit_empty");
  emit(ExperimentReport{}, dir);
  EXPECT_EQ(slurp(dir / "curves.csv"), "delta,n,o_mean,o_std,o_theory\n");
  EXPECT_EQ(slurp(dir / "spacings.csv"), "s,count,poisson_pdf,wigner_pdf\n");
  const json doc = json::parse(slurp(dir / "report.json"));
  EXPECT_TRUE(doc["results"].empty());
  EXPECT_TRUE(doc.contains("meta"));
}

TEST(Emit, IoErrorsSurface) {
  const auto dir = scratch_dir("emit_io");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  try {
    emit(ExperimentReport{}, dir / "file" / "sub");
    FAIL() << "expected IoError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace fidlab
