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

#include "layoutvqa/vocab.hpp"

#include <set>
#include <stdexcept>

#include "layoutvqa/layout_hash.hpp"
#include "layoutvqa/text.hpp"

namespace layoutvqa {

Vocabulary::Vocabulary() {
  for (const char* s : {"<pad>", "<bos>", "<eos>", "<unk>"}) add(s);
  add(std::string(kSeparatorToken));
  for (int i = 0; i < 4 * kMaxHashLevels; ++i) add(std::string(1, static_cast<char>('A' + i)));
  add(std::string(1, question_symbol()));
}

Vocabulary::Vocabulary(const std::vector<std::string>& tokens) {
  for (const auto& t : tokens) {
    if (index_.contains(t)) throw std::invalid_argument("duplicate vocabulary token '" + t + "'");
    add(t);
  }
}

Vocabulary Vocabulary::build(const Dataset& dataset) {
  Vocabulary v;
  std::set<std::string> words;
  for (const auto& d : dataset.documents) {
    for (const auto& t : d.tokens) {
      for (auto& w : text::split_whitespace(t.text)) words.insert(std::move(w));
    }
  }
  for (const auto& s : dataset.samples) {
    for (auto& w : text::split_whitespace(s.qa.question)) words.insert(std::move(w));
    for (auto& w : text::split_whitespace(s.qa.answer)) words.insert(std::move(w));
  }
  for (const auto& w : words) v.add(w);
  return v;
}

TokenId Vocabulary::add(const std::string& token) {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.push_back(token);
  index_.emplace(token, id);
  return id;
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

TokenId Vocabulary::letter_id(char letter) const {
  auto it = index_.find(std::string(1, letter));
  if (it == index_.end()) {
    throw std::out_of_range(std::string("layout letter '") + letter + "' not in vocabulary");
  }
  return it->second;
}

}  // namespace layoutvqa
