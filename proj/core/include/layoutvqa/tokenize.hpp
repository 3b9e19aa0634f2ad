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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "layoutvqa/doc_model.hpp"
#include "layoutvqa/vocab.hpp"

namespace layoutvqa {

inline constexpr std::size_t kDefaultMaxInputLen = 180;

// Encoder input: question words followed by OCR words, each position paired
// with one layout letter per hashing level.
struct TokenizedInput {
  std::vector<TokenId> ids;
  std::vector<std::vector<char>> letters;  // levels x ids.size()
  std::size_t question_length = 0;

  std::size_t length() const { return ids.size(); }
  std::size_t levels() const { return letters.size(); }
};

// The document must already be in the desired context order. Boxes are
// hashed over the whole document before truncation to max_input_len.
TokenizedInput tokenize(std::string_view question, const Document& document,
                        const Vocabulary& vocab, int levels,
                        std::size_t max_input_len = kDefaultMaxInputLen);

std::vector<TokenId> encode_words(std::string_view s, const Vocabulary& vocab);

// Joins tokens with single spaces, stopping at EOS and skipping PAD/BOS.
std::string detokenize(const std::vector<TokenId>& ids, const Vocabulary& vocab);

}  // namespace layoutvqa
