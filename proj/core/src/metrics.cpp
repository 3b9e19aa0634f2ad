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

#include "layoutvqa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "layoutvqa/text.hpp"

namespace layoutvqa {

std::string normalize_answer(std::string_view s, const EvalConfig& config) {
  if (!config.normalize_text) return std::string(s);
  return text::collapse_whitespace(text::lowercase(s));
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(text::to_u32(a), text::to_u32(b));
}

double normalized_levenshtein(std::string_view a, std::string_view b) {
  const auto ua = text::to_u32(a);
  const auto ub = text::to_u32(b);
  const std::size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}

F1Score f1_components(const AnswerPair& pair, const EvalConfig& config) {
  const auto pred = text::split_whitespace(normalize_answer(pair.prediction, config));
  const auto truth = text::split_whitespace(normalize_answer(pair.ground_truth, config));
  if (pred.empty() || truth.empty()) {
    const double v = pred.empty() && truth.empty() ? 1.0 : 0.0;
    return {v, v, v};
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& t : truth) ++counts[t];
  std::size_t shared = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++shared;
    }
  }
  F1Score s;
  s.precision = static_cast<double>(shared) / static_cast<double>(pred.size());
  s.recall = static_cast<double>(shared) / static_cast<double>(truth.size());
  s.f1 = shared == 0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

double f1_pair(const AnswerPair& pair, const EvalConfig& config) {
  return f1_components(pair, config).f1;
}

bool exact_match(const AnswerPair& pair, const EvalConfig& config) {
  return normalize_answer(pair.prediction, config) == normalize_answer(pair.ground_truth, config);
}

double anls_pair(const AnswerPair& pair, const EvalConfig& config) {
  if (!(config.tau >= 0.0 && config.tau <= 1.0)) {
    throw std::invalid_argument("tau must be in [0, 1]");
  }
  const double nl = normalized_levenshtein(normalize_answer(pair.prediction, config),
                                           normalize_answer(pair.ground_truth, config));
  return nl < config.tau ? 1.0 - nl : 0.0;
}

namespace {

template <typename Fn>
double mean_of(std::span<const AnswerPair> pairs, Fn&& per_pair) {
  if (pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : pairs) sum += per_pair(p);
  return sum / static_cast<double>(pairs.size());
}

}  // namespace

double accuracy(std::span<const AnswerPair> pairs, const EvalConfig& config) {
  return mean_of(pairs, [&](const AnswerPair& p) { return exact_match(p, config) ? 1.0 : 0.0; });
}

double mean_f1(std::span<const AnswerPair> pairs, const EvalConfig& config) {
  return mean_of(pairs, [&](const AnswerPair& p) { return f1_pair(p, config); });
}

double anls(std::span<const AnswerPair> pairs, const EvalConfig& config) {
  return mean_of(pairs, [&](const AnswerPair& p) { return anls_pair(p, config); });
}

EvalReport evaluate(std::span<const AnswerPair> pairs, const EvalConfig& config) {
  return {anls(pairs, config), mean_f1(pairs, config), accuracy(pairs, config), pairs.size()};
}

double as_percent(double score) { return std::round(score * 10000.0) / 100.0; }

}  // namespace layoutvqa
