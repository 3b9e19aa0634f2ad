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

// Unicode helpers shared by the metrics and the annotation tools. All strings
// are UTF-8; code-point sequences are std::u32string.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace layoutvqa::text {

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);

std::string nfc(std::string_view utf8);
std::string lowercase(std::string_view utf8);

// Unicode general category P* or S*.
bool is_punct_or_symbol(char32_t cp);
bool is_space(char32_t cp);
bool is_decimal_digit(char32_t cp);

// Strip leading/trailing whitespace and collapse inner runs to one space.
std::string collapse_whitespace(std::string_view utf8);

std::vector<std::string> split_whitespace(std::string_view utf8);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace layoutvqa::text
