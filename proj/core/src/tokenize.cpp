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

#include "layoutvqa/tokenize.hpp"

#include "layoutvqa/layout_hash.hpp"
#include "layoutvqa/text.hpp"

namespace layoutvqa {

std::vector<TokenId> encode_words(std::string_view s, const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  for (const auto& w : text::split_whitespace(s)) ids.push_back(vocab.id(w));
  return ids;
}

TokenizedInput tokenize(std::string_view question, const Document& document,
                        const Vocabulary& vocab, int levels, std::size_t max_input_len) {
  TokenizedInput in;
  in.letters.assign(static_cast<std::size_t>(levels), {});

  auto push = [&](TokenId id, const std::vector<char>& column) {
    if (in.ids.size() >= max_input_len) return false;
    in.ids.push_back(id);
    for (std::size_t i = 0; i < column.size(); ++i) in.letters[i].push_back(column[i]);
    return true;
  };

  const std::vector<char> question_column(static_cast<std::size_t>(levels), question_symbol());
  for (TokenId id : encode_words(question, vocab)) {
    if (!push(id, question_column)) break;
  }
  in.question_length = in.ids.size();

  if (document.tokens.empty()) return in;
  std::vector<BoundingBox> boxes;
  boxes.reserve(document.tokens.size());
  for (const auto& t : document.tokens) boxes.push_back(t.box);
  const HashGrid grid = layout_hash(boxes, levels);

  for (std::size_t i = 0; i < document.tokens.size(); ++i) {
    const auto column = code_letters(grid.codes[i]);
    for (TokenId id : encode_words(document.tokens[i].text, vocab)) {
      if (!push(id, column)) return in;
    }
  }
  return in;
}

std::string detokenize(const std::vector<TokenId>& ids, const Vocabulary& vocab) {
  std::vector<std::string> words;
  for (TokenId id : ids) {
    if (id == Vocabulary::kEos) break;
    if (id == Vocabulary::kPad || id == Vocabulary::kBos) continue;
    words.push_back(vocab.token(id));
  }
  return text::join(words, " ");
}

}  // namespace layoutvqa
