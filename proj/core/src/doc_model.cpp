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

#include "layoutvqa/doc_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <tuple>
#include <unordered_set>

#include <json.hpp>

#include "layoutvqa/error.hpp"
#include "layoutvqa/text.hpp"

namespace layoutvqa {

using nlohmann::json;

std::unordered_map<std::string, std::size_t> Dataset::index() const {
  std::unordered_map<std::string, std::size_t> idx;
  idx.reserve(documents.size());
  for (std::size_t i = 0; i < documents.size(); ++i) idx.emplace(documents[i].id, i);
  return idx;
}

const Document& Dataset::document(const std::string& id) const {
  for (const auto& d : documents) {
    if (d.id == id) return d;
  }
  throw SchemaError("unknown document id '" + id + "'");
}

namespace {

constexpr std::string_view kQuestionTypeNames[] = {"Location", "Object", "Quantity", "Time",
                                                   "Reason",   "Manner", "Person",   "Other"};
constexpr std::string_view kAnswerTypeNames[] = {"Numeric", "NonNumeric", "Hybrid"};
constexpr std::string_view kAlignRuleNames[] = {"exact", "deletion", "unanswerable"};

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view s, const std::string_view (&names)[N]) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(QuestionType t) { return kQuestionTypeNames[static_cast<int>(t)]; }
std::string_view to_string(AnswerType t) { return kAnswerTypeNames[static_cast<int>(t)]; }
std::string_view to_string(AlignRule r) { return kAlignRuleNames[static_cast<int>(r)]; }

std::optional<QuestionType> parse_question_type(std::string_view s) {
  return parse_enum<QuestionType>(s, kQuestionTypeNames);
}
std::optional<AnswerType> parse_answer_type(std::string_view s) {
  return parse_enum<AnswerType>(s, kAnswerTypeNames);
}
std::optional<AlignRule> parse_align_rule(std::string_view s) {
  return parse_enum<AlignRule>(s, kAlignRuleNames);
}

std::vector<OcrToken> serialize_reading_order(std::vector<OcrToken> tokens,
                                              double line_threshold) {
  if (tokens.size() < 2) return tokens;
  std::vector<double> heights;
  heights.reserve(tokens.size());
  for (const auto& t : tokens) heights.push_back(t.box.height());
  std::sort(heights.begin(), heights.end());
  const std::size_t m = heights.size() / 2;
  const double median =
      heights.size() % 2 ? heights[m] : heights[m - 1] + (heights[m] - heights[m - 1]) / 2.0;
  const double gap = line_threshold * median;

  auto geometry_key = [](const OcrToken& t) {
    return std::tie(t.box.x_min, t.box.y_min, t.box.x_max, t.box.y_max, t.text);
  };

  std::vector<std::size_t> order(tokens.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ya = tokens[a].box.center().y;
    const double yb = tokens[b].box.center().y;
    if (ya != yb) return ya < yb;
    return geometry_key(tokens[a]) < geometry_key(tokens[b]);
  });

  struct Line {
    std::vector<std::size_t> members;
    double mean_y = 0.0;
  };
  std::vector<Line> lines;
  double prev_y = 0.0;
  for (std::size_t idx : order) {
    const double y = tokens[idx].box.center().y;
    if (lines.empty() || y - prev_y > gap) lines.emplace_back();
    lines.back().members.push_back(idx);
    prev_y = y;
  }
  for (auto& line : lines) {
    double sum = 0.0;
    for (std::size_t idx : line.members) sum += tokens[idx].box.center().y;
    line.mean_y = sum / static_cast<double>(line.members.size());
    std::stable_sort(line.members.begin(), line.members.end(),
                     [&](std::size_t a, std::size_t b) {
                       return geometry_key(tokens[a]) < geometry_key(tokens[b]);
                     });
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const Line& a, const Line& b) { return a.mean_y < b.mean_y; });

  std::vector<OcrToken> out;
  out.reserve(tokens.size());
  for (const auto& line : lines) {
    for (std::size_t idx : line.members) out.push_back(std::move(tokens[idx]));
  }
  return out;
}

std::vector<std::string> split_answer_items(std::string_view answer) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = answer.find(kSeparatorToken, pos);
    const auto piece = answer.substr(pos, next == std::string_view::npos ? answer.npos : next - pos);
    items.push_back(text::collapse_whitespace(piece));
    if (next == std::string_view::npos) break;
    pos = next + kSeparatorToken.size();
  }
  return items;
}

// ---------------------------------------------------------------------------
// JSON codecs

namespace {

[[noreturn]] void schema_fail(std::size_t line, std::string_view field, std::string_view what) {
  throw SchemaError("line " + std::to_string(line) + ": field '" + std::string(field) + "' " +
                    std::string(what));
}

const json& require(const json& obj, const char* field, std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end()) schema_fail(line, field, "is missing");
  return *it;
}

std::string require_string(const json& obj, const char* field, std::size_t line) {
  const json& v = require(obj, field, line);
  if (!v.is_string()) schema_fail(line, field, "must be a string");
  return v.get<std::string>();
}

json parse_line(std::string_view line, std::size_t line_number) {
  try {
    json j = json::parse(line);
    if (!j.is_object()) schema_fail(line_number, "<record>", "must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw SchemaError("line " + std::to_string(line_number) + ": malformed record: " + e.what());
  }
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return lines;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& l : lines) out << l << '\n';
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

}  // namespace

std::string encode_document(const Document& doc) {
  json tokens = json::array();
  for (const auto& t : doc.tokens) {
    tokens.push_back({{"text", t.text},
                      {"box", {t.box.x_min, t.box.y_min, t.box.x_max, t.box.y_max}}});
  }
  return json{{"id", doc.id}, {"tokens", std::move(tokens)}}.dump();
}

std::string encode_sample(const Sample& s) {
  json j = {{"document_id", s.document_id}, {"question", s.qa.question}, {"answer", s.qa.answer}};
  if (s.qa.question_type) j["question_type"] = std::string(to_string(*s.qa.question_type));
  if (s.qa.answer_type) j["answer_type"] = std::string(to_string(*s.qa.answer_type));
  if (s.span) {
    j["span"] = {{"start", s.span->start},
                 {"end", s.span->end},
                 {"rule", std::string(to_string(s.span->rule))}};
  }
  return j.dump();
}

Document decode_document(std::string_view line, std::size_t n) {
  const json j = parse_line(line, n);
  Document doc;
  doc.id = require_string(j, "id", n);
  const json& tokens = require(j, "tokens", n);
  if (!tokens.is_array()) schema_fail(n, "tokens", "must be an array");
  doc.tokens.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!t.is_object()) schema_fail(n, "tokens", "entries must be objects");
    OcrToken tok;
    tok.text = require_string(t, "text", n);
    if (tok.text.empty()) schema_fail(n, "text", "must be non-empty");
    if (tok.text.find_first_of("\r\n") != std::string::npos) {
      schema_fail(n, "text", "must not contain line breaks");
    }
    const json& box = require(t, "box", n);
    if (!box.is_array() || box.size() != 4 ||
        !std::all_of(box.begin(), box.end(), [](const json& v) { return v.is_number(); })) {
      schema_fail(n, "box", "must be an array of 4 numbers");
    }
    tok.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
               box[3].get<double>()};
    try {
      validate_box(tok.box);
    } catch (const std::invalid_argument& e) {
      schema_fail(n, "box", e.what());
    }
    doc.tokens.push_back(std::move(tok));
  }
  return doc;
}

Sample decode_sample(std::string_view line, std::size_t n) {
  const json j = parse_line(line, n);
  Sample s;
  s.document_id = require_string(j, "document_id", n);
  s.qa.question = require_string(j, "question", n);
  s.qa.answer = require_string(j, "answer", n);
  if (s.qa.answer.empty()) schema_fail(n, "answer", "must be non-empty");
  if (auto it = j.find("question_type"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) schema_fail(n, "question_type", "must be a string");
    s.qa.question_type = parse_question_type(it->get<std::string>());
    if (!s.qa.question_type) schema_fail(n, "question_type", "has an unknown value");
  }
  if (auto it = j.find("answer_type"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) schema_fail(n, "answer_type", "must be a string");
    s.qa.answer_type = parse_answer_type(it->get<std::string>());
    if (!s.qa.answer_type) schema_fail(n, "answer_type", "has an unknown value");
  }
  if (auto it = j.find("span"); it != j.end() && !it->is_null()) {
    const json& sp = *it;
    if (!sp.is_object()) schema_fail(n, "span", "must be an object");
    const json& start = require(sp, "start", n);
    const json& end = require(sp, "end", n);
    if (!start.is_number_unsigned() || !end.is_number_unsigned()) {
      schema_fail(n, "span", "start/end must be non-negative integers");
    }
    SpanAlignment span;
    span.start = start.get<std::size_t>();
    span.end = end.get<std::size_t>();
    const auto rule = parse_align_rule(require_string(sp, "rule", n));
    if (!rule) schema_fail(n, "rule", "has an unknown value");
    span.rule = *rule;
    if (span.start > span.end) schema_fail(n, "span", "start must not exceed end");
    s.span = span;
  }
  return s;
}

std::vector<Document> load_documents(const std::filesystem::path& path) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    Document d = decode_document(lines[i], i + 1);
    if (!seen.insert(d.id).second) schema_fail(i + 1, "id", "duplicates an earlier document");
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<Sample> load_samples(const std::filesystem::path& path) {
  std::vector<Sample> samples;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    samples.push_back(decode_sample(lines[i], i + 1));
  }
  return samples;
}

Dataset load_dataset(const std::filesystem::path& documents,
                     const std::filesystem::path& samples) {
  Dataset ds;
  ds.documents = load_documents(documents);
  ds.samples = load_samples(samples);
  const auto idx = ds.index();
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (!idx.contains(ds.samples[i].document_id)) {
      throw SchemaError("sample " + std::to_string(i + 1) + ": field 'document_id' '" +
                        ds.samples[i].document_id + "' does not resolve");
    }
  }
  return ds;
}

void save_documents(const std::filesystem::path& path, const std::vector<Document>& docs) {
  std::vector<std::string> lines;
  lines.reserve(docs.size());
  for (const auto& d : docs) lines.push_back(encode_document(d));
  write_lines(path, lines);
}

void save_samples(const std::filesystem::path& path, const std::vector<Sample>& samples) {
  std::vector<std::string> lines;
  lines.reserve(samples.size());
  for (const auto& s : samples) lines.push_back(encode_sample(s));
  write_lines(path, lines);
}

void save_dataset(const std::filesystem::path& documents,
                  const std::filesystem::path& samples, const Dataset& dataset) {
  save_documents(documents, dataset.documents);
  save_samples(samples, dataset.samples);
}

}  // namespace layoutvqa
