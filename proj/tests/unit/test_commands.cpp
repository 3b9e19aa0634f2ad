// Copyright 2026 The layoutvqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "layoutvqa/error.hpp"

using namespace layoutvqa;
using namespace layoutvqa::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("layoutvqa-cmd-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const char* name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SynthConfig small_synth() {
  SynthConfig sc;
  sc.rows = 2;
  sc.cols = 2;
  sc.vocab_size = 10;
  sc.duplicate_fraction = 0.5;
  sc.shuffle = true;
  sc.seed = 3;
  return sc;
}

}  // namespace

TEST_CASE("exit codes follow the error class") {
  CHECK(exit_code_for(IoError("x")) == 2);
  CHECK(exit_code_for(SchemaError("x")) == 3);
  CHECK(exit_code_for(DivergenceError("x")) == 4);
  CHECK(exit_code_for(std::invalid_argument("x")) == 1);
}

TEST_CASE("percentages use two decimals") {
  CHECK(percent(1.0) == "100.00");
  CHECK(percent(2.0 / 3.0) == "66.67");
  CHECK(percent(0.0) == "0.00");
}

TEST_CASE("ablation flags are exclusive") {
  ModelOptions m;
  m.text_only = true;
  m.no_ratio = true;
  CHECK_THROWS_AS(m.to_config(), std::invalid_argument);
  m.no_ratio = false;
  CHECK(m.to_config().layout == LayoutMode::TextOnly);
}

TEST_CASE("synth, align, classify and eval on gold round-trip") {
  TempDir dir;
  std::ostringstream rec, table;
  Output out{rec, table};
  cmd_synth(small_synth(), 30, dir / "d.jsonl", dir / "s.jsonl", out);

  const auto cov = cmd_align(dir / "d.jsonl", dir / "s.jsonl", dir / "aligned.jsonl", false, out);
  CHECK(cov.fully_matched == 1.0);
  for (const auto& s : load_samples(dir / "aligned.jsonl")) {
    REQUIRE(s.span.has_value());
    CHECK(s.span->rule == AlignRule::Exact);
  }

  cmd_classify(dir / "s.jsonl", dir / "typed.jsonl", out);
  for (const auto& s : load_samples(dir / "typed.jsonl")) {
    CHECK(s.qa.question_type.has_value());
    CHECK(s.qa.answer_type.has_value());
  }

  // Predictions identical to the gold answers.
  {
    std::ofstream p(dir / "p.jsonl");
    for (const auto& s : load_samples(dir / "s.jsonl")) {
      p << nlohmann::json{{"prediction", s.qa.answer}}.dump() << '\n';
    }
  }
  table.str("");
  const auto r = cmd_eval(dir / "p.jsonl", dir / "s.jsonl", 0.5, out);
  CHECK(r.anls == 1.0);
  CHECK(r.f1 == 1.0);
  CHECK(r.accuracy == 1.0);
  CHECK(table.str().find("ANLS 100.00  F1 100.00  Accuracy 100.00") != std::string::npos);

  // One prediction short is a schema error.
  {
    std::ofstream p(dir / "short.jsonl");
    p << R"({"prediction":"x"})" << '\n';
  }
  CHECK_THROWS_AS(cmd_eval(dir / "short.jsonl", dir / "s.jsonl", 0.5, out), SchemaError);
  CHECK_THROWS_AS(cmd_eval(dir / "missing.jsonl", dir / "s.jsonl", 0.5, out), IoError);
}

TEST_CASE("hash prints one letter string per token") {
  TempDir dir;
  save_documents(dir / "d.jsonl", {Document{"r", {{"a", {0, 0, 1, 1}}, {"b", {9, 9, 10, 10}}}}});
  std::ostringstream rec, table;
  cmd_hash(dir / "d.jsonl", 2, {rec, table});
  const auto j = nlohmann::json::parse(rec.str());
  CHECK(j["letters"] == nlohmann::json::array({"AE", "DH"}));
}

TEST_CASE("train and infer are reproducible") {
  TempDir dir;
  std::ostringstream rec, table;
  Output out{rec, table};
  cmd_synth(small_synth(), 20, dir / "d.jsonl", dir / "s.jsonl", out);
  ModelOptions m;
  m.d_model = 8;
  m.d_ff = 16;
  m.encoder_layers = 1;
  m.decoder_layers = 1;
  m.max_input_len = 16;
  m.max_answer_len = 4;
  TrainConfig t;
  t.steps = 30;
  t.batch_size = 4;
  cmd_train(dir / "d.jsonl", dir / "s.jsonl", m, t, dir / "a.ckpt", false, out);
  cmd_train(dir / "d.jsonl", dir / "s.jsonl", m, t, dir / "b.ckpt", false, out);
  CHECK(slurp(dir / "a.ckpt") == slurp(dir / "b.ckpt"));
  cmd_infer(dir / "a.ckpt", dir / "d.jsonl", dir / "s.jsonl", dir / "p1.jsonl", 0.5, false, out);
  cmd_infer(dir / "a.ckpt", dir / "d.jsonl", dir / "s.jsonl", dir / "p2.jsonl", 0.5, false, out);
  CHECK(slurp(dir / "p1.jsonl") == slurp(dir / "p2.jsonl"));
  CHECK_FALSE(slurp(dir / "p1.jsonl").empty());
}

TEST_CASE("default gradcheck passes") {
  std::ostringstream rec, table;
  const auto rep = cmd_gradcheck(default_gradcheck_options(), {rec, table});
  CHECK(rep.max_relative_error < 1e-4);
  CHECK(table.str().find("PASS") != std::string::npos);
}

TEST_CASE("ablation emits one row per level and ratio setting") {
  const auto tr = gen_dataset(small_synth(), 10, "tr");
  const auto te = gen_dataset(small_synth(), 5, "te");
  ModelOptions m;
  m.d_model = 8;
  m.d_ff = 16;
  m.encoder_layers = 1;
  m.decoder_layers = 1;
  m.max_input_len = 16;
  m.max_answer_len = 4;
  TrainConfig t;
  t.steps = 5;
  t.batch_size = 2;
  std::ostringstream rec, table;
  const auto rows = cmd_ablate({2, 3}, tr, te, m, t, 0.5, {rec, table});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].levels == 2);
  CHECK(rows[1].mode == LayoutMode::NoRatio);
  CHECK(rows[1].omega == 1.0);
  CHECK(rows[0].omega > 0.0);
  CHECK(rows[0].omega < 1.0);
  std::istringstream lines(rec.str());
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("omega"));
    CHECK(j.contains("anls"));
    ++n;
  }
  CHECK(n == 4);
}
