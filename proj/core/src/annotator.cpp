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

#include "layoutvqa/annotator.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "layoutvqa/text.hpp"

namespace layoutvqa {

namespace {

Keyword make_keyword(std::string_view phrase, QuestionType type) {
  return {text::split_whitespace(text::lowercase(text::nfc(phrase))), type};
}

}  // namespace

KeywordTable::KeywordTable(std::vector<Keyword> keywords) {
  for (auto& k : keywords) {
    if (k.syllables.empty()) continue;
    (k.syllables.size() > 1 ? multi_ : single_).push_back(std::move(k));
  }
  std::stable_sort(multi_.begin(), multi_.end(), [](const Keyword& a, const Keyword& b) {
    return a.syllables.size() > b.syllables.size();
  });
}

const KeywordTable& KeywordTable::standard() {
  using QT = QuestionType;
  static const KeywordTable table({
      make_keyword("đâu", QT::Location),
      make_keyword("gì", QT::Object),
      make_keyword("nào", QT::Object),
      make_keyword("mấy", QT::Quantity),
      make_keyword("nhiêu", QT::Quantity),
      make_keyword("khi nào", QT::Time),
      make_keyword("lúc nào", QT::Time),
      make_keyword("thời gian nào", QT::Time),
      make_keyword("ngày nào", QT::Time),
      make_keyword("ngày mấy", QT::Time),
      make_keyword("ngày bao nhiêu", QT::Time),
      make_keyword("mùng nào", QT::Time),
      make_keyword("mùng mấy", QT::Time),
      make_keyword("tháng nào", QT::Time),
      make_keyword("tháng mấy", QT::Time),
      make_keyword("giờ nào", QT::Time),
      make_keyword("mấy giờ", QT::Time),
      make_keyword("năm nào", QT::Time),
      make_keyword("thứ mấy", QT::Time),
      make_keyword("vì sao", QT::Reason),
      make_keyword("tại sao", QT::Reason),
      make_keyword("để làm gì", QT::Reason),
      make_keyword("thế nào", QT::Manner),
      make_keyword("bằng cách nào", QT::Manner),
      make_keyword("làm cách nào", QT::Manner),
      make_keyword("làm sao", QT::Manner),
      make_keyword("như nào", QT::Manner),
      make_keyword("ai", QT::Person),
  });
  return table;
}

std::vector<std::string> question_syllables(std::string_view question) {
  auto cps = text::to_u32(text::lowercase(text::nfc(question)));
  for (auto& c : cps) {
    if (text::is_punct_or_symbol(c)) c = U' ';
  }
  return text::split_whitespace(text::to_utf8(cps));
}

std::vector<QuestionType> matched_question_types(std::string_view question,
                                                 const KeywordTable& table) {
  const auto syl = question_syllables(question);
  std::vector<bool> consumed(syl.size(), false);
  std::set<QuestionType> found;

  for (const auto& kw : table.multi_syllable()) {
    const std::size_t len = kw.syllables.size();
    if (len > syl.size()) continue;
    for (std::size_t i = 0; i + len <= syl.size(); ++i) {
      bool hit = true;
      for (std::size_t k = 0; k < len && hit; ++k) {
        hit = !consumed[i + k] && syl[i + k] == kw.syllables[k];
      }
      if (!hit) continue;
      for (std::size_t k = 0; k < len; ++k) consumed[i + k] = true;
      found.insert(kw.type);
      i += len - 1;
    }
  }
  for (const auto& kw : table.single_syllable()) {
    for (std::size_t i = 0; i < syl.size(); ++i) {
      if (!consumed[i] && syl[i] == kw.syllables.front()) {
        consumed[i] = true;
        found.insert(kw.type);
      }
    }
  }
  return {found.begin(), found.end()};
}

QuestionType classify_question(std::string_view question, const KeywordTable& table) {
  const auto types = matched_question_types(question, table);
  return types.size() == 1 ? types.front() : QuestionType::Other;
}

AnswerType classify_answer_type(std::string_view answer) {
  bool any_digit = false;
  bool any_other = false;
  for (char32_t c : text::to_u32(text::nfc(answer))) {
    if (text::is_punct_or_symbol(c) || text::is_space(c)) continue;
    (text::is_decimal_digit(c) ? any_digit : any_other) = true;
  }
  if (!any_digit) return AnswerType::NonNumeric;
  return any_other ? AnswerType::Hybrid : AnswerType::Numeric;
}

OcrContext build_context(const Document& doc) {
  OcrContext ctx;
  ctx.offsets.reserve(doc.tokens.size());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (i) ctx.text.push_back(U' ');
    const auto cps = text::to_u32(text::nfc(doc.tokens[i].text));
    const std::size_t begin = ctx.text.size();
    ctx.text.append(cps);
    ctx.offsets.emplace_back(begin, ctx.text.size());
  }
  return ctx;
}

CharMatch match_item(std::u32string_view item, std::u32string_view context) {
  CharMatch m;
  if (item.empty()) return m;
  if (auto pos = context.find(item); pos != std::u32string_view::npos) {
    return {pos, pos + item.size(), AlignRule::Exact, 0};
  }
  if (item.size() < 2) return m;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::u32string variant;
  for (std::size_t k = 0; k < item.size(); ++k) {
    variant.assign(item.substr(0, k));
    variant.append(item.substr(k + 1));
    const auto pos = context.find(variant);
    if (pos != std::u32string_view::npos && pos < best) {
      best = pos;
      m = {pos, pos + variant.size(), AlignRule::Deletion, k};
    }
  }
  return m;
}

namespace {

// First and last token overlapping [begin, end), as context indices.
std::pair<std::size_t, std::size_t> covering_tokens(const OcrContext& ctx, std::size_t begin,
                                                    std::size_t end) {
  std::size_t first = ctx.offsets.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < ctx.offsets.size(); ++i) {
    const auto [b, e] = ctx.offsets[i];
    if (e > begin && b < end) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  return {first, last};
}

}  // namespace

SpanAlignment align_answer(std::string_view answer, const OcrContext& context) {
  const SpanAlignment unanswerable{kClsIndex, kClsIndex, AlignRule::Unanswerable};
  const auto items = split_answer_items(text::nfc(answer));
  std::size_t first = std::numeric_limits<std::size_t>::max();
  std::size_t last = 0;
  AlignRule rule = AlignRule::Exact;
  for (const auto& item : items) {
    const CharMatch m = match_item(text::to_u32(item), context.text);
    if (m.rule == AlignRule::Unanswerable) return unanswerable;
    if (m.rule == AlignRule::Deletion) rule = AlignRule::Deletion;
    const auto [a, b] = covering_tokens(context, m.begin, m.end);
    // A match made only of separator spaces covers no token.
    if (a > b) return unanswerable;
    first = std::min(first, a);
    last = std::max(last, b);
  }
  return {first + 1, last + 1, rule};
}

CoverageStats coverage_stats(const Dataset& dataset) {
  CoverageStats stats;
  stats.n = dataset.samples.size();
  if (stats.n == 0) return stats;
  const auto idx = dataset.index();
  std::vector<OcrContext> contexts(dataset.documents.size());
  std::vector<bool> built(dataset.documents.size(), false);
  std::size_t exact = 0;
  std::size_t resolved = 0;
  for (const auto& s : dataset.samples) {
    const auto it = idx.find(s.document_id);
    if (it == idx.end()) continue;
    if (!built[it->second]) {
      contexts[it->second] = build_context(dataset.documents[it->second]);
      built[it->second] = true;
    }
    const auto span = align_answer(s.qa.answer, contexts[it->second]);
    if (span.rule == AlignRule::Exact) ++exact;
    if (span.answerable()) ++resolved;
  }
  stats.fully_matched = static_cast<double>(exact) / static_cast<double>(stats.n);
  stats.with_deletion = static_cast<double>(resolved) / static_cast<double>(stats.n);
  return stats;
}

}  // namespace layoutvqa
