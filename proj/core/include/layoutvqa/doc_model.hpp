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

// Documents, OCR tokens and QA samples, plus their line-delimited JSON files.
//
// documents file, one record per line:
//   {"id": "...", "tokens": [{"text": "...", "box": [x_min, y_min, x_max, y_max]}]}
// samples file, one record per line:
//   {"document_id": "...", "question": "...", "answer": "...",
//    "question_type": "...", "answer_type": "...",
//    "span": {"start": s, "end": e, "rule": "exact|deletion|unanswerable"}}
// The last three fields are optional.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "layoutvqa/layout_hash.hpp"

namespace layoutvqa {

// Separator between the items of a list-style answer.
inline constexpr std::string_view kSeparatorToken = "<sep>";

struct OcrToken {
  std::string text;
  BoundingBox box;
  bool operator==(const OcrToken&) const = default;
};

struct Document {
  std::string id;
  std::vector<OcrToken> tokens;
  bool operator==(const Document&) const = default;
};

enum class QuestionType { Location, Object, Quantity, Time, Reason, Manner, Person, Other };
enum class AnswerType { Numeric, NonNumeric, Hybrid };

enum class AlignRule { Exact, Deletion, Unanswerable };

// Token span of an answer in the serialized OCR context. Index 0 is the CLS
// sentinel; OCR token i sits at index i + 1.
struct SpanAlignment {
  std::size_t start = 0;
  std::size_t end = 0;
  AlignRule rule = AlignRule::Unanswerable;

  bool answerable() const { return rule != AlignRule::Unanswerable; }
  bool operator==(const SpanAlignment&) const = default;
};

inline constexpr std::size_t kClsIndex = 0;

struct QAPair {
  std::string question;
  std::string answer;
  std::optional<QuestionType> question_type;
  std::optional<AnswerType> answer_type;
  bool operator==(const QAPair&) const = default;
};

struct Sample {
  std::string document_id;
  QAPair qa;
  std::optional<SpanAlignment> span;
  bool operator==(const Sample&) const = default;
};

struct Dataset {
  std::vector<Document> documents;
  std::vector<Sample> samples;

  // Index of documents by id; rebuilt on demand.
  std::unordered_map<std::string, std::size_t> index() const;
  const Document& document(const std::string& id) const;

  bool operator==(const Dataset& o) const {
    return documents == o.documents && samples == o.samples;
  }
};

std::string_view to_string(QuestionType t);
std::string_view to_string(AnswerType t);
std::string_view to_string(AlignRule r);
std::optional<QuestionType> parse_question_type(std::string_view s);
std::optional<AnswerType> parse_answer_type(std::string_view s);
std::optional<AlignRule> parse_align_rule(std::string_view s);

// Group tokens into lines (chained on ascending y-center, gap <= 0.5 x median
// box height), order lines by mean y-center and tokens within a line by x_min.
std::vector<OcrToken> serialize_reading_order(std::vector<OcrToken> tokens,
                                              double line_threshold = 0.5);

// Split a list-style answer on the separator token; items are trimmed.
std::vector<std::string> split_answer_items(std::string_view answer);

std::vector<Document> load_documents(const std::filesystem::path& path);
std::vector<Sample> load_samples(const std::filesystem::path& path);
// Loads both files and checks that every sample's document_id resolves.
Dataset load_dataset(const std::filesystem::path& documents,
                     const std::filesystem::path& samples);

void save_documents(const std::filesystem::path& path, const std::vector<Document>& docs);
void save_samples(const std::filesystem::path& path, const std::vector<Sample>& samples);
void save_dataset(const std::filesystem::path& documents,
                  const std::filesystem::path& samples, const Dataset& dataset);

// Single-record codecs used by the file functions and the CLI.
std::string encode_document(const Document& doc);
std::string encode_sample(const Sample& sample);
Document decode_document(std::string_view line, std::size_t line_number);
Sample decode_sample(std::string_view line, std::size_t line_number);

}  // namespace layoutvqa
