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

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "layoutvqa/metrics.hpp"
#include "layoutvqa/text.hpp"
#include "oracles.hpp"

using namespace layoutvqa;

namespace {

std::u32string random_u32(std::mt19937_64& rng, std::size_t max_len) {
  static const std::u32string alphabet = U"ab c.0đơ5ệ ";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::u32string s(len(rng), U'a');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

}  // namespace

TEST_CASE("levenshtein agrees with the full-table oracle") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_u32(rng, 12);
    const auto b = random_u32(rng, 12);
    CHECK(levenshtein(a, b) == oracle::levenshtein(a, b));
  }
  CHECK(levenshtein(std::string_view("kitten"), std::string_view("sitting")) == 3);
  CHECK(levenshtein(std::string_view(""), std::string_view("abc")) == 3);
  CHECK(levenshtein(std::string_view("đơn"), std::string_view("don")) == 2);  // code points
}

TEST_CASE("levenshtein is a metric") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_u32(rng, 8);
    const auto b = random_u32(rng, 8);
    const auto c = random_u32(rng, 8);
    CHECK(levenshtein(a, b) == levenshtein(b, a));
    CHECK((levenshtein(a, b) == 0) == (a == b));
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("worked ANLS pairs") {
  CHECK(anls_pair({"abc", "abd"}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(anls_pair({"50.000", "50 000"}) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(normalized_levenshtein("50.000", "50 000") == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(anls_pair({"xyz", "abc"}) == 0.0);
  CHECK(anls_pair({"", ""}) == 1.0);
  CHECK(normalized_levenshtein("", "") == 0.0);
}

TEST_CASE("ANLS threshold zeroes distant pairs") {
  // NL exactly 0.5 is not below tau.
  CHECK(anls_pair({"ab", "cb"}) == 0.0);
  CHECK(anls_pair({"abcd", "abxy"}) == 0.0);
  CHECK(anls_pair({"abcd", "abcx"}) == doctest::Approx(0.75));
  EvalConfig loose;
  loose.tau = 0.8;
  CHECK(anls_pair({"abcd", "abxy"}, loose) == doctest::Approx(0.5));
  EvalConfig bad;
  bad.tau = 1.5;
  CHECK_THROWS_AS(anls_pair({"a", "a"}, bad), std::invalid_argument);
}

TEST_CASE("F1 on multiset token overlap") {
  const auto s = f1_components({"50", "50 000"});
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 0.5);
  CHECK(s.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const auto m = f1_components({"a a b", "a b b"});
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(f1_pair({"", ""}) == 1.0);
  CHECK(f1_pair({"x", ""}) == 0.0);
  CHECK(f1_pair({"", "x"}) == 0.0);
  CHECK(f1_pair({"tiền mặt", "Tiền  Mặt"}) == 1.0);
}

TEST_CASE("normalization lowercases, trims and collapses whitespace") {
  CHECK(normalize_answer("  Trà   ĐÀO (L) ", {}) == "trà đào (l)");
  EvalConfig raw;
  raw.normalize_text = false;
  CHECK(normalize_answer(" A ", raw) == " A ");
  CHECK(exact_match({" Tổng  Cộng", "tổng cộng"}));
  CHECK_FALSE(exact_match({"tổng", "tổng cộng"}));
}

TEST_CASE("corpus metrics are means of per-pair scores") {
  const std::vector<AnswerPair> pairs = {{"50 000", "50 000"}, {"50", "50 000"}, {"abc", "xyz"}};
  const auto r = evaluate(pairs);
  CHECK(r.n == 3);
  CHECK(r.accuracy == doctest::Approx(1.0 / 3.0));
  CHECK(r.f1 == doctest::Approx((1.0 + 2.0 / 3.0 + 0.0) / 3.0));
  // "50" vs "50 000": distance 4 of 6, NL >= 0.5 -> 0.
  CHECK(r.anls == doctest::Approx(1.0 / 3.0));
  CHECK(evaluate(std::vector<AnswerPair>{}).anls == 0.0);
  CHECK(as_percent(2.0 / 3.0) == doctest::Approx(66.67));
  CHECK(as_percent(1.0) == 100.0);
}

TEST_CASE("per-pair ANLS matches the oracle on random strings") {
  std::mt19937_64 rng(4);
  EvalConfig raw;
  raw.normalize_text = false;
  for (int i = 0; i < 300; ++i) {
    const auto a = random_u32(rng, 10);
    const auto b = random_u32(rng, 10);
    const double got = anls_pair({text::to_utf8(a), text::to_utf8(b)}, raw);
    CHECK(got == doctest::Approx(oracle::anls_score(a, b, 0.5)).epsilon(1e-12));
  }
}
