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

// Answer-quality metrics: token F1, exact-match accuracy and ANLS.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace layoutvqa {

struct AnswerPair {
  std::string prediction;
  std::string ground_truth;
};

struct EvalConfig {
  double tau = 0.5;
  bool normalize_text = true;  // lowercase, trim, collapse whitespace
};

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  double anls = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t n = 0;
};

// Applies the config's normalization (or returns the input unchanged).
std::string normalize_answer(std::string_view s, const EvalConfig& config);

// Code-point edit distance with unit costs.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

// Edit distance over max code-point length; 0 when both are empty.
double normalized_levenshtein(std::string_view a, std::string_view b);

F1Score f1_components(const AnswerPair& pair, const EvalConfig& config = {});
double f1_pair(const AnswerPair& pair, const EvalConfig& config = {});
bool exact_match(const AnswerPair& pair, const EvalConfig& config = {});
// 1 - NL when NL < tau, else 0.
double anls_pair(const AnswerPair& pair, const EvalConfig& config = {});

double accuracy(std::span<const AnswerPair> pairs, const EvalConfig& config = {});
double mean_f1(std::span<const AnswerPair> pairs, const EvalConfig& config = {});
double anls(std::span<const AnswerPair> pairs, const EvalConfig& config = {});

EvalReport evaluate(std::span<const AnswerPair> pairs, const EvalConfig& config = {});

// Score in [0, 1] as a percentage rounded to 2 decimals.
double as_percent(double score);

}  // namespace layoutvqa
