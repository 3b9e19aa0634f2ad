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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace layoutvqa {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned rectangle in page coordinates (y grows downwards).
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  Point center() const {
    return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0};
  }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  bool operator==(const Rect&) const = default;
};

// An OCR bounding box. Same representation as Rect; invariants are checked by
// validate_box().
using BoundingBox = Rect;

// Throws std::invalid_argument unless the box is finite with min <= max.
void validate_box(const BoundingBox& box);

// Quadrants are numbered in reading order: 1 top-left, 2 top-right,
// 3 bottom-left, 4 bottom-right.
struct QuadSymbol {
  int level = 1;
  int quadrant = 1;
  bool operator==(const QuadSymbol&) const = default;
};

// The per-level quadrant chain of one box; symbols[i].level == i + 1.
struct LayoutCode {
  std::vector<QuadSymbol> symbols;

  std::size_t levels() const { return symbols.size(); }
  bool operator==(const LayoutCode&) const = default;
};

struct HashGrid {
  std::vector<LayoutCode> codes;  // one per input box, same order
  Rect root_rect;
};

inline constexpr int kMaxHashLevels = 6;
inline constexpr int kDefaultHashLevels = 4;

// Envelope of all box corners. Throws std::invalid_argument("no boxes") on
// empty input.
Rect bounding_rect(std::span<const BoundingBox> boxes);

// Half-open split of the cell at its midlines: a center on a midline goes
// right/bottom. A zero-extent axis always yields the left/top bit. The
// comparison against the midline is exact.
int assign_quadrant(Point center, const Rect& cell);

// Sub-cell of the cell for quadrant 1..4, split at lo + (hi - lo) / 2
// (rounded, for display and containment checks).
Rect quadrant_cell(const Rect& cell, int quadrant);

// Recursive quadrant descent of every box center, levels 1..levels, inside
// bounding_rect(boxes). Midline tests are exact against the dyadic
// subdivision of the root, so the result equals digit extraction of the
// real-valued relative coordinates.
HashGrid layout_hash(std::span<const BoundingBox> boxes, int levels);

// 'A' + 4 * (level - 1) + (quadrant - 1). Throws std::out_of_range
// ("alphabet exhausted") for level > kMaxHashLevels.
char symbol_to_letter(QuadSymbol symbol);

// Layout letter carried by question tokens at every level.
constexpr char question_symbol() { return '0'; }

// Letters of one code, level 1 first.
std::vector<char> code_letters(const LayoutCode& code);

// levels x n grid: row i holds the level-(i+1) letter of every box.
std::vector<std::vector<char>> letter_grid(const HashGrid& grid);

}  // namespace layoutvqa
