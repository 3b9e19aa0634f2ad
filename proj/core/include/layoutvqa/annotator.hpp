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

// Rule-based annotation of Vietnamese receipt QA: question type from
// interrogative keywords, answer type from its digits, and the extractive
// span of an answer inside the serialized OCR text.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "layoutvqa/doc_model.hpp"

namespace layoutvqa {

struct Keyword {
  std::vector<std::string> syllables;  // NFC, lowercase
  QuestionType type;
};

// Interrogative keywords per class. Multi-syllable entries are matched before
// single syllables and consume what they match.
class KeywordTable {
 public:
  static const KeywordTable& standard();

  explicit KeywordTable(std::vector<Keyword> keywords);

  // Longest first, then table order.
  const std::vector<Keyword>& multi_syllable() const { return multi_; }
  const std::vector<Keyword>& single_syllable() const { return single_; }

 private:
  std::vector<Keyword> multi_;
  std::vector<Keyword> single_;
};

// NFC, lowercase, P*/S* characters replaced by spaces, split on whitespace.
std::vector<std::string> question_syllables(std::string_view question);

// Every class whose keyword occurs, after multi-syllable matches consume
// their syllables. Sorted, unique.
std::vector<QuestionType> matched_question_types(std::string_view question,
                                                 const KeywordTable& table = KeywordTable::standard());

// Exactly one matched class gives that class; none or several give Other.
QuestionType classify_question(std::string_view question,
                               const KeywordTable& table = KeywordTable::standard());

// Ignoring punctuation, symbols and whitespace: only digits -> Numeric, no
// digits (or nothing left) -> NonNumeric, otherwise Hybrid.
AnswerType classify_answer_type(std::string_view answer);

// Serialized OCR text: NFC token texts joined by single spaces, with the
// half-open code-point range of every token.
struct OcrContext {
  std::u32string text;
  std::vector<std::pair<std::size_t, std::size_t>> offsets;
};

OcrContext build_context(const Document& doc);

// Character-level match of one answer item in the context.
struct CharMatch {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  AlignRule rule = AlignRule::Unanswerable;
  std::size_t deleted_index = 0;  // for AlignRule::Deletion
};

// Exact first occurrence; otherwise, for items of two or more characters, the
// earliest occurrence of any single-character deletion (ties: smallest
// deleted index).
CharMatch match_item(std::u32string_view item, std::u32string_view context);

// Aligns the answer (each <sep> item independently) and converts the
// character range to token indices. Rule is the weakest rule any item needed;
// the span covers all items. Unresolvable answers map to the CLS sentinel.
SpanAlignment align_answer(std::string_view answer, const OcrContext& context);

struct CoverageStats {
  double fully_matched = 0.0;
  double with_deletion = 0.0;
  std::size_t n = 0;
};

CoverageStats coverage_stats(const Dataset& dataset);

}  // namespace layoutvqa
