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

#include "layoutvqa/layout_hash.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <stdexcept>
#include <string>

namespace layoutvqa {

void validate_box(const BoundingBox& box) {
  if (!std::isfinite(box.x_min) || !std::isfinite(box.y_min) ||
      !std::isfinite(box.x_max) || !std::isfinite(box.y_max)) {
    throw std::invalid_argument("box coordinates must be finite");
  }
  if (box.x_min > box.x_max || box.y_min > box.y_max) {
    throw std::invalid_argument("box must satisfy min <= max on both axes");
  }
}

Rect bounding_rect(std::span<const BoundingBox> boxes) {
  if (boxes.empty()) throw std::invalid_argument("no boxes");
  Rect r = boxes.front();
  for (const auto& b : boxes.subspan(1)) {
    r.x_min = std::min(r.x_min, b.x_min);
    r.y_min = std::min(r.y_min, b.y_min);
    r.x_max = std::max(r.x_max, b.x_max);
    r.y_max = std::max(r.y_max, b.y_max);
  }
  return r;
}

namespace {

// Error-free transformations: a + b == s + err and a * b == p + err exactly,
// barring overflow.
std::pair<double, double> two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

std::pair<double, double> two_product(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

// Exact sign of a sum of doubles. The terms are accumulated into a
// nonoverlapping expansion, whose most significant nonzero component
// carries the sign of the whole sum.
int exact_sign(std::initializer_list<double> terms) {
  double e[16];
  std::size_t n = 0;
  for (double q : terms) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto [sum, err] = two_sum(q, e[i]);
      e[i] = err;
      q = sum;
    }
    e[n++] = q;
  }
  for (std::size_t i = n; i-- > 0;) {
    if (e[i] != 0.0) return e[i] > 0.0 ? 1 : -1;
  }
  return 0;
}

// 1 when c >= lo + (hi - lo) * (2a + 1) / 2^(k + 1), evaluated exactly:
// the midline of dyadic cell a at depth k of [lo, hi].
int dyadic_bit(double c, double lo, double hi, int k, std::uint64_t a) {
  if (!(hi > lo)) return 0;
  const double scale = std::ldexp(1.0, k + 1);
  const auto odd = static_cast<double>(2 * a + 1);
  // scale * c + (odd - scale) * lo - odd * hi >= 0
  const auto [p_lo, e_lo] = two_product(odd - scale, lo);
  const auto [p_hi, e_hi] = two_product(-odd, hi);
  return exact_sign({scale * c, p_lo, e_lo, p_hi, e_hi}) >= 0 ? 1 : 0;
}

}  // namespace

int assign_quadrant(Point center, const Rect& cell) {
  const int bit_x = dyadic_bit(center.x, cell.x_min, cell.x_max, 0, 0);
  const int bit_y = dyadic_bit(center.y, cell.y_min, cell.y_max, 0, 0);
  return 1 + bit_x + 2 * bit_y;
}

Rect quadrant_cell(const Rect& cell, int quadrant) {
  if (quadrant < 1 || quadrant > 4) {
    throw std::out_of_range("quadrant must be in 1..4");
  }
  const int bit_x = (quadrant - 1) & 1;
  const int bit_y = (quadrant - 1) >> 1;
  Rect sub = cell;
  const double mid_x = cell.x_min + (cell.x_max - cell.x_min) / 2.0;
  const double mid_y = cell.y_min + (cell.y_max - cell.y_min) / 2.0;
  if (cell.x_max > cell.x_min) (bit_x ? sub.x_min : sub.x_max) = mid_x;
  if (cell.y_max > cell.y_min) (bit_y ? sub.y_min : sub.y_max) = mid_y;
  return sub;
}

HashGrid layout_hash(std::span<const BoundingBox> boxes, int levels) {
  if (levels < 1 || levels > kMaxHashLevels) {
    throw std::out_of_range("hash levels must be in 1.." +
                            std::to_string(kMaxHashLevels));
  }
  for (const auto& box : boxes) validate_box(box);
  HashGrid grid;
  grid.root_rect = bounding_rect(boxes);
  const Rect& r = grid.root_rect;
  grid.codes.reserve(boxes.size());
  for (const auto& box : boxes) {
    const Point c = box.center();
    LayoutCode code;
    code.symbols.reserve(static_cast<std::size_t>(levels));
    // Cells are kept as dyadic indices of the root so every midline test is
    // against the exact subdivision, not a rounded copy of it.
    std::uint64_t ax = 0;
    std::uint64_t ay = 0;
    for (int level = 1; level <= levels; ++level) {
      const int bx = dyadic_bit(c.x, r.x_min, r.x_max, level - 1, ax);
      const int by = dyadic_bit(c.y, r.y_min, r.y_max, level - 1, ay);
      code.symbols.push_back({level, 1 + bx + 2 * by});
      ax = 2 * ax + static_cast<std::uint64_t>(bx);
      ay = 2 * ay + static_cast<std::uint64_t>(by);
    }
    grid.codes.push_back(std::move(code));
  }
  return grid;
}

char symbol_to_letter(QuadSymbol symbol) {
  if (symbol.level > kMaxHashLevels) throw std::out_of_range("alphabet exhausted");
  if (symbol.level < 1 || symbol.quadrant < 1 || symbol.quadrant > 4) {
    throw std::out_of_range("invalid quadrant symbol");
  }
  return static_cast<char>('A' + 4 * (symbol.level - 1) + (symbol.quadrant - 1));
}

std::vector<char> code_letters(const LayoutCode& code) {
  std::vector<char> out;
  out.reserve(code.symbols.size());
  for (const auto& s : code.symbols) out.push_back(symbol_to_letter(s));
  return out;
}

std::vector<std::vector<char>> letter_grid(const HashGrid& grid) {
  const std::size_t levels = grid.codes.empty() ? 0 : grid.codes.front().levels();
  std::vector<std::vector<char>> rows(levels, std::vector<char>(grid.codes.size()));
  for (std::size_t j = 0; j < grid.codes.size(); ++j) {
    for (std::size_t i = 0; i < levels; ++i) {
      rows[i][j] = symbol_to_letter(grid.codes[j].symbols[i]);
    }
  }
  return rows;
}

}  // namespace layoutvqa
