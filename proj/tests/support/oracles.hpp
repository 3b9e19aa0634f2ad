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

// Independent reference implementations used by the unit and acceptance
// tests. None of these call into the library code they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "layoutvqa/layout_hash.hpp"

namespace oracle {

// Envelope of the corners, as a fold.
inline layoutvqa::Rect bounding_rect(const std::vector<layoutvqa::BoundingBox>& boxes) {
  const double inf = std::numeric_limits<double>::infinity();
  return std::accumulate(boxes.begin(), boxes.end(), layoutvqa::Rect{inf, inf, -inf, -inf},
                         [](layoutvqa::Rect acc, const layoutvqa::BoundingBox& b) {
                           return layoutvqa::Rect{std::min(acc.x_min, b.x_min),
                                                  std::min(acc.y_min, b.y_min),
                                                  std::max(acc.x_max, b.x_max),
                                                  std::max(acc.y_max, b.y_max)};
                         });
}

// Digit extraction in exact integer arithmetic: every coordinate is scaled
// by 2^100 to an integer, then the level-i bit along an axis is bit (L - i)
// of floor((c - lo) * 2^L / (hi - lo)), clamped to the last cell at c = hi.
// Throws when a coordinate cannot be represented exactly at that scale.
inline __int128 scaled(double v) {
  constexpr int kShift = 100;
  const double s = std::ldexp(v, kShift);
  if (!(std::abs(v) < 0x1p19) || s != std::trunc(s)) {
    throw std::domain_error("coordinate outside the exact oracle range");
  }
  int e = 0;
  const double m = std::frexp(v, &e);
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  const int shift = e - 53 + kShift;
  return shift >= 0 ? static_cast<__int128>(mant) << shift
                    : static_cast<__int128>(mant >> -shift);
}

inline std::vector<int> quadrants(double cx, double cy, const layoutvqa::Rect& root, int levels) {
  const __int128 cells = static_cast<__int128>(1) << levels;
  auto index = [&](double c, double lo, double hi) -> unsigned long long {
    const __int128 C = scaled(c);
    const __int128 Lo = scaled(lo);
    const __int128 Hi = scaled(hi);
    if (!(Hi > Lo)) return 0;
    const __int128 i = ((C - Lo) * cells) / (Hi - Lo);
    return static_cast<unsigned long long>(std::clamp<__int128>(i, 0, cells - 1));
  };
  const auto ix = index(cx, root.x_min, root.x_max);
  const auto iy = index(cy, root.y_min, root.y_max);
  std::vector<int> out;
  for (int i = 1; i <= levels; ++i) {
    const int bx = static_cast<int>((ix >> (levels - i)) & 1ULL);
    const int by = static_cast<int>((iy >> (levels - i)) & 1ULL);
    out.push_back(1 + bx + 2 * by);
  }
  return out;
}

inline char letter(int level, int quadrant) {
  static const std::string alphabet = "ABCDEFGHIJKLMNOPQRSTUVWX";
  return alphabet.at(static_cast<std::size_t>(4 * (level - 1) + (quadrant - 1)));
}

// Full (n+1) x (m+1) table.
template <typename Str>
std::size_t levenshtein(const Str& a, const Str& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) t[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) t[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = t[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      t[i][j] = std::min({t[i - 1][j] + 1, t[i][j - 1] + 1, sub});
    }
  }
  return t[a.size()][b.size()];
}

template <typename Str>
double anls_score(const Str& a, const Str& b, double tau) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  const double nl = static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
  return nl < tau ? 1.0 - nl : 0.0;
}

// Random boxes with coordinates on a coarse lattice so that ties and
// boundary hits are common.
inline std::vector<layoutvqa::BoundingBox> random_boxes(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> coord(0, 64);
  std::uniform_int_distribution<int> extent(0, 12);
  std::vector<layoutvqa::BoundingBox> boxes;
  boxes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = coord(rng) * 7.5;
    const double y = coord(rng) * 3.25;
    boxes.push_back({x, y, x + extent(rng) * 2.5, y + extent(rng) * 1.5});
  }
  return boxes;
}

}  // namespace oracle
