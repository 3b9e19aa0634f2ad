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

#include <bit>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "layoutvqa/checkpoint.hpp"
#include "layoutvqa/error.hpp"
#include "layoutvqa/layout_hash.hpp"
#include "layoutvqa/synth.hpp"
#include "layoutvqa/tokenize.hpp"
#include "layoutvqa/vocab.hpp"

using namespace layoutvqa;
namespace fs = std::filesystem;

namespace {

Document two_words() {
  return {"d", {{"Trà đào", {0, 0, 10, 10}}, {"50.000", {90, 90, 100, 100}}}};
}

}  // namespace

TEST_CASE("vocabulary holds specials, letters and dataset words") {
  const Vocabulary base;
  CHECK(base.token(Vocabulary::kPad) == "<pad>");
  CHECK(base.token(Vocabulary::kSep) == "<sep>");
  CHECK(base.id("<sep>") == Vocabulary::kSep);
  CHECK(base.token(base.letter_id('A')) == "A");
  CHECK(base.token(base.letter_id('X')) == "X");
  CHECK(base.token(base.letter_id('0')) == "0");
  CHECK(base.id("unseen") == Vocabulary::kUnk);

  Dataset ds;
  ds.documents.push_back(two_words());
  ds.samples.push_back({"d", {"giá bao nhiêu ?", "50.000", {}, {}}, {}});
  const auto v = Vocabulary::build(ds);
  for (const char* w : {"Trà", "đào", "50.000", "giá", "nhiêu", "?"}) CHECK(v.contains(w));
  CHECK(v.size() == base.size() + 7);
  CHECK(Vocabulary(v.tokens()) == v);
}

TEST_CASE("question tokens carry the question symbol at every level") {
  Vocabulary v;
  for (const char* w : {"giá", "?", "Trà", "đào", "50.000"}) v.add(w);
  const auto in = tokenize("giá ?", two_words(), v, 3);
  CHECK(in.question_length == 2);
  REQUIRE(in.length() == 5);
  REQUIRE(in.levels() == 3);
  for (int l = 0; l < 3; ++l) {
    CHECK(in.letters[l][0] == '0');
    CHECK(in.letters[l][1] == '0');
  }
  // Both words of the first token share its code; the second token sits in
  // the bottom-right corner.
  CHECK(in.letters[0][2] == 'A');
  CHECK(in.letters[0][3] == 'A');
  CHECK(in.letters[0][4] == 'D');
  CHECK(in.letters[2][4] == 'L');
  CHECK(detokenize(in.ids, v) == "giá ? Trà đào 50.000");
}

TEST_CASE("truncation keeps codes computed over the whole page") {
  Vocabulary v;
  for (const char* w : {"q", "Trà", "đào", "50.000"}) v.add(w);
  const auto full = tokenize("q", two_words(), v, 2);
  const auto cut = tokenize("q", two_words(), v, 2, 3);
  REQUIRE(cut.length() == 3);
  for (int l = 0; l < 2; ++l) {
    for (std::size_t t = 0; t < 3; ++t) CHECK(cut.letters[l][t] == full.letters[l][t]);
  }
}

TEST_CASE("detokenize stops at EOS and skips padding") {
  Vocabulary v;
  const auto a = v.add("a");
  const auto b = v.add("b");
  CHECK(detokenize({Vocabulary::kBos, a, Vocabulary::kPad, b, Vocabulary::kEos, a}, v) == "a b");
  CHECK(encode_words("  a   zz b ", v) == std::vector<TokenId>{a, Vocabulary::kUnk, b});
}

TEST_CASE("checkpoints round-trip bit for bit") {
  SynthConfig sc;
  sc.rows = 2;
  sc.cols = 2;
  sc.duplicate_fraction = 0.5;
  const auto ds = gen_dataset(sc, 2);
  ModelConfig mc;
  mc.d_model = 8;
  mc.heads = 2;
  mc.d_ff = 16;
  mc.encoder_layers = 1;
  mc.decoder_layers = 1;
  mc.max_input_len = 20;
  mc.max_answer_len = 4;
  mc.per_dim_ratio = true;
  mc.tie_embeddings = true;
  mc.layout = LayoutMode::NoRatio;
  mc.seed = 42;
  Model m = init_model(mc, Vocabulary::build(ds));
  // Awkward values must survive too.
  m.params.rho(0) = -0.0;
  m.params.rho(1) = 1e-310;
  m.params.embedding(0, 0) = 0.1 + 0.2;

  const fs::path path = fs::temp_directory_path() / "layoutvqa-ckpt-test.bin";
  save_checkpoint(path, m);
  Model back = load_checkpoint(path);
  CHECK(back.vocab == m.vocab);
  CHECK(back.config.layout == LayoutMode::NoRatio);
  CHECK(back.config.per_dim_ratio);
  CHECK(back.config.tie_embeddings);
  CHECK(back.config.d_model == 8);
  CHECK(back.config.seed == 42);
  auto a = tensors(m.params);
  auto b = tensors(back.params);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    REQUIRE(a[i].size == b[i].size);
    for (std::size_t k = 0; k < a[i].size; ++k) {
      REQUIRE(std::bit_cast<std::uint64_t>(a[i].data[k]) ==
              std::bit_cast<std::uint64_t>(b[i].data[k]));
    }
  }

  // Corruptions are reported, not silently accepted.
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "NOTACKPT";
  }
  CHECK_THROWS_AS(load_checkpoint(path), SchemaError);
  fs::remove(path);
  CHECK_THROWS_AS(load_checkpoint(path), IoError);
}

TEST_CASE("question-only input fills every level with the question symbol") {
  Vocabulary v;
  const auto in = tokenize("a b c", Document{"e", {}}, v, 4);
  REQUIRE(in.levels() == 4);
  for (const auto& row : in.letters) CHECK(row == std::vector<char>(3, '0'));
}

TEST_CASE("long inputs are capped and drop the OCR tail") {
  Vocabulary v;
  Document d{"long", {}};
  for (int i = 0; i < 195; ++i) {
    d.tokens.push_back({"w" + std::to_string(i), {double(i), 0, double(i) + 1, 1}});
    v.add("w" + std::to_string(i));
  }
  const auto in = tokenize("q1 q2 q3 q4 q5", d, v, 4);
  CHECK(in.length() == kDefaultMaxInputLen);
  CHECK(v.token(in.ids.back()) == "w174");
  for (const auto& row : in.letters) CHECK(row.size() == kDefaultMaxInputLen);
}

TEST_CASE("a top-left code spells A E I M") {
  Vocabulary v;
  v.add("x");
  const Document d{"d", {{"x", {0, 0, 1, 1}}, {"x", {100, 100, 101, 101}}}};
  const auto in = tokenize("", d, v, 4);
  CHECK(in.letters[0][0] == 'A');
  CHECK(in.letters[1][0] == 'E');
  CHECK(in.letters[2][0] == 'I');
  CHECK(in.letters[3][0] == 'M');
}
