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

#include "layoutvqa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "layoutvqa/annotator.hpp"
#include "layoutvqa/layout_hash.hpp"
#include "layoutvqa/text.hpp"

namespace layoutvqa {

namespace {

constexpr std::string_view kRightPrefix = "what is right of ";
constexpr std::string_view kQuestionSuffix = " ?";

const std::vector<std::string>& base_words() {
  static const std::vector<std::string> words = {
      "total",   "cash",    "change",  "tax",     "qty",     "item",    "price",  "store",
      "date",    "time",    "card",    "subtotal", "discount", "receipt", "order",  "table",
      "coffee",  "tea",     "milk",    "bread",   "rice",    "noodle",  "water",  "juice",
      "tiền",    "tổng",    "cộng",    "thuế",    "giảm",    "giá",     "món",    "bàn",
      "hóa",     "đơn",     "ngày",    "giờ",     "khách",   "thẻ",     "số",     "lượng"};
  return words;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

// Extent of a box along one axis. Centers sit 3/8 into the cell (5/8 in the
// far half of the page) so that, with the page edges pinned by the outermost
// boxes, each center stays inside one level-4 sub-cell of a 4-cell axis under
// jitter up to 0.2. Outermost boxes are flush with the page edge; interior
// boxes have a fixed half-size.
std::pair<double, double> box_extent(int index, int count, double cell, double half,
                                     double jitter, double page) {
  const bool far_half = 2 * index >= count;
  const double center = (index + (far_half ? 0.625 : 0.375) + jitter) * cell;
  if (count == 1) return {0.0, page};
  if (index == 0) return {0.0, 2.0 * center};
  if (index == count - 1) return {page - 2.0 * (page - center), page};
  return {center - half * cell, center + half * cell};
}

struct CellIndex {
  std::map<std::pair<int, int>, std::size_t> at;  // (row, col) -> token index
  std::vector<GridCell> cells;
};

CellIndex index_cells(const SynthConfig& config, const Document& doc) {
  CellIndex idx;
  idx.cells.reserve(doc.tokens.size());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const GridCell c = grid_cell(config, doc.tokens[i].box);
    idx.cells.push_back(c);
    idx.at.emplace(std::pair{c.row, c.col}, i);
  }
  return idx;
}

std::vector<int> level1_quadrants(const Document& doc) {
  std::vector<BoundingBox> boxes;
  boxes.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) boxes.push_back(t.box);
  const HashGrid grid = layout_hash(boxes, 1);
  std::vector<int> q;
  q.reserve(grid.codes.size());
  for (const auto& code : grid.codes) q.push_back(code.symbols.front().quadrant);
  return q;
}

}  // namespace

std::string_view to_string(SynthTask task) {
  switch (task) {
    case SynthTask::QuadrantLookup: return "quadrant-lookup";
    case SynthTask::RightNeighbor: return "right-neighbor";
    case SynthTask::RegionValue: return "region-value";
  }
  return "?";
}

std::optional<SynthTask> parse_synth_task(std::string_view s) {
  for (auto t : {SynthTask::QuadrantLookup, SynthTask::RightNeighbor, SynthTask::RegionValue}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

void SynthConfig::validate() const {
  if (rows < 1 || cols < 1 || rows * cols < 4) {
    throw std::invalid_argument("grid must have at least four cells");
  }
  if (vocab_size < 1) throw std::invalid_argument("vocab_size must be positive");
  if (!(duplicate_fraction >= 0.0 && duplicate_fraction <= 1.0)) {
    throw std::invalid_argument("duplicate_fraction must be in [0, 1]");
  }
  if (!(cell_width > 0.0) || !(cell_height > 0.0)) {
    throw std::invalid_argument("cell size must be positive");
  }
  if (!(jitter >= 0.0 && jitter <= 0.5)) throw std::invalid_argument("jitter must be in [0, 0.5]");
  if (task == SynthTask::RightNeighbor && cols < 2) {
    throw std::invalid_argument("right-neighbor needs at least two columns");
  }
}

std::vector<std::string> word_pool(std::size_t size) {
  const auto& words = base_words();
  std::vector<std::string> pool;
  pool.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (i < words.size()) {
      pool.push_back(words[i]);
    } else {
      pool.push_back(std::to_string(1000 + 500 * (i - words.size())));
    }
  }
  return pool;
}

GridCell grid_cell(const SynthConfig& config, const BoundingBox& box) {
  const Point c = box.center();
  const int col = static_cast<int>(std::floor(c.x / config.cell_width));
  const int row = static_cast<int>(std::floor(c.y / config.cell_height));
  return {std::clamp(row, 0, config.rows - 1), std::clamp(col, 0, config.cols - 1)};
}

Document gen_receipt(const SynthConfig& config, std::string id) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const std::size_t n = static_cast<std::size_t>(config.rows) * static_cast<std::size_t>(config.cols);

  std::size_t k = static_cast<std::size_t>(
      std::ceil(config.duplicate_fraction * static_cast<double>(n) - 1e-9));
  k = std::min(k, n);
  if (k == 1 || (config.task == SynthTask::RightNeighbor && k < 2)) k = 2;
  const std::size_t uniques = n - k;
  if (uniques + (k > 0 ? 1 : 0) > config.vocab_size) {
    throw std::invalid_argument("vocab_size too small for the requested grid");
  }
  const std::size_t groups = k == 0 ? 0 : std::min(k / 2, config.vocab_size - uniques);

  auto words = word_pool(config.vocab_size);
  std::shuffle(words.begin(), words.end(), rng);

  // Group g gets k / groups copies, the first k % groups groups one more.
  std::vector<std::vector<std::string>> group_texts(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t size = k / groups + (g < k % groups ? 1 : 0);
    group_texts[g].assign(size, words[g]);
  }

  std::vector<std::string> cell_text(n);
  std::vector<bool> used(n, false);
  const auto cell_of = [&](int r, int c) { return static_cast<std::size_t>(r * config.cols + c); };

  std::size_t first_group = 0;
  if (config.task == SynthTask::RightNeighbor && groups > 0 &&
      group_texts[0].size() - 1 <= static_cast<std::size_t>(config.rows)) {
    const int inner = config.rows * (config.cols - 1);
    const int pick = std::uniform_int_distribution<int>(0, inner - 1)(rng);
    const int ar = pick / (config.cols - 1);
    const int ac = pick % (config.cols - 1);
    cell_text[cell_of(ar, ac)] = words[0];
    used[cell_of(ar, ac)] = true;
    // Decoys go to last-column cells that are not the anchor's neighbor.
    std::vector<int> last_rows;
    for (int r = 0; r < config.rows; ++r) {
      if (!(ac == config.cols - 2 && r == ar)) last_rows.push_back(r);
    }
    std::shuffle(last_rows.begin(), last_rows.end(), rng);
    const std::size_t decoys = group_texts[0].size() - 1;
    if (decoys <= last_rows.size()) {
      for (std::size_t d = 0; d < decoys; ++d) {
        const auto cell = cell_of(last_rows[d], config.cols - 1);
        cell_text[cell] = words[0];
        used[cell] = true;
      }
      first_group = 1;
    } else {
      cell_text[cell_of(ar, ac)].clear();
      used[cell_of(ar, ac)] = false;
    }
  }

  std::vector<std::string> rest;
  rest.reserve(n);
  for (std::size_t g = first_group; g < groups; ++g) {
    rest.insert(rest.end(), group_texts[g].begin(), group_texts[g].end());
  }
  for (std::size_t u = 0; u < uniques; ++u) rest.push_back(words[groups + u]);
  std::shuffle(rest.begin(), rest.end(), rng);
  std::size_t next = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (!used[c]) cell_text[c] = rest[next++];
  }

  Document doc;
  doc.id = std::move(id);
  doc.tokens.reserve(n);
  std::uniform_real_distribution<double> jitter(-config.jitter / 2.0, config.jitter / 2.0);
  const double page_w = config.cols * config.cell_width;
  const double page_h = config.rows * config.cell_height;
  for (int r = 0; r < config.rows; ++r) {
    const auto [y0, y1] = box_extent(r, config.rows, config.cell_height, 0.25, jitter(rng), page_h);
    for (int c = 0; c < config.cols; ++c) {
      const auto [x0, x1] = box_extent(c, config.cols, config.cell_width, 0.3, jitter(rng), page_w);
      doc.tokens.push_back({cell_text[cell_of(r, c)],
                            {round2(x0), round2(y0), round2(x1), round2(y1)}});
    }
  }
  if (config.shuffle) std::shuffle(doc.tokens.begin(), doc.tokens.end(), rng);
  return doc;
}

std::string right_neighbor_question(std::string_view anchor) {
  return std::string(kRightPrefix) + std::string(anchor) + std::string(kQuestionSuffix);
}

std::string quadrant_question(int quadrant) {
  return "which token is in quadrant " + std::to_string(quadrant) + std::string(kQuestionSuffix);
}

std::string region_question(int quadrant) {
  return "list tokens in quadrant " + std::to_string(quadrant) + std::string(kQuestionSuffix);
}

std::optional<std::string> right_neighbor_anchor(std::string_view question) {
  if (question.size() <= kRightPrefix.size() + kQuestionSuffix.size()) return std::nullopt;
  if (!question.starts_with(kRightPrefix) || !question.ends_with(kQuestionSuffix)) {
    return std::nullopt;
  }
  return std::string(question.substr(
      kRightPrefix.size(), question.size() - kRightPrefix.size() - kQuestionSuffix.size()));
}

std::vector<QAPair> gen_qa(const SynthConfig& config, const Document& document) {
  std::vector<QAPair> out;
  if (document.tokens.empty()) return out;
  const CellIndex idx = index_cells(config, document);

  switch (config.task) {
    case SynthTask::RightNeighbor: {
      std::map<std::string, std::vector<std::size_t>> by_text;
      for (std::size_t i = 0; i < document.tokens.size(); ++i) {
        by_text[document.tokens[i].text].push_back(i);
      }
      for (const auto& [text, members] : by_text) {
        if (members.size() < 2) continue;
        std::optional<std::size_t> inner;
        bool valid = true;
        for (auto m : members) {
          if (idx.cells[m].col == config.cols - 1) continue;
          if (inner) {
            valid = false;
            break;
          }
          inner = m;
        }
        if (!valid || !inner) continue;
        const GridCell a = idx.cells[*inner];
        const auto it = idx.at.find({a.row, a.col + 1});
        if (it == idx.at.end()) continue;
        const std::string& answer = document.tokens[it->second].text;
        if (answer == text) continue;
        out.push_back({right_neighbor_question(text), answer, std::nullopt, std::nullopt});
      }
      break;
    }
    case SynthTask::QuadrantLookup:
    case SynthTask::RegionValue: {
      const auto quadrant = level1_quadrants(document);
      for (int q = 1; q <= 4; ++q) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < quadrant.size(); ++i) {
          if (quadrant[i] == q) members.push_back(i);
        }
        if (members.empty()) continue;
        if (config.task == SynthTask::QuadrantLookup) {
          if (members.size() != 1) continue;
          out.push_back({quadrant_question(q), document.tokens[members[0]].text, std::nullopt,
                         std::nullopt});
          continue;
        }
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
          const auto& ca = idx.cells[a];
          const auto& cb = idx.cells[b];
          return std::pair{ca.row, ca.col} < std::pair{cb.row, cb.col};
        });
        std::vector<std::string> items;
        items.reserve(members.size());
        for (auto m : members) items.push_back(document.tokens[m].text);
        const std::string sep = " " + std::string(kSeparatorToken) + " ";
        out.push_back({region_question(q), text::join(items, sep), std::nullopt, std::nullopt});
      }
      break;
    }
  }
  return out;
}

Dataset gen_dataset(const SynthConfig& config, std::size_t documents, std::string_view id_prefix) {
  Dataset ds;
  ds.documents.reserve(documents);
  for (std::size_t i = 0; i < documents; ++i) {
    SynthConfig c = config;
    c.seed = splitmix64(config.seed ^ splitmix64(i));
    Document doc = gen_receipt(c, std::string(id_prefix) + "-" + std::to_string(i));
    for (auto& qa : gen_qa(c, doc)) ds.samples.push_back({doc.id, std::move(qa), std::nullopt});
    ds.documents.push_back(std::move(doc));
  }
  return ds;
}

double right_neighbor_text_only_chance(const Document& document, std::string_view anchor) {
  std::map<std::string_view, std::size_t> counts;
  std::size_t others = 0;
  for (const auto& t : document.tokens) {
    if (t.text == anchor) continue;
    ++counts[t.text];
    ++others;
  }
  if (others == 0) return 0.0;
  std::size_t best = 0;
  for (const auto& [_, c] : counts) best = std::max(best, c);
  return static_cast<double>(best) / static_cast<double>(others);
}

Dataset plant_ocr_errors(const Dataset& dataset, double deletion_fraction,
                         double unmatched_fraction, std::uint64_t seed) {
  if (!(deletion_fraction >= 0.0) || !(unmatched_fraction >= 0.0) ||
      deletion_fraction + unmatched_fraction > 1.0) {
    throw std::invalid_argument("fractions must be non-negative and sum to at most 1");
  }
  Dataset out = dataset;
  const std::size_t n = dataset.samples.size();
  const auto want_deletion = static_cast<std::size_t>(std::llround(deletion_fraction * n));
  const auto want_unmatched = static_cast<std::size_t>(std::llround(unmatched_fraction * n));
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  const auto idx = dataset.index();
  // Drops `drops` characters from every token equal to the first answer item
  // and keeps the copy only if alignment then yields `expect`.
  auto corrupt = [&](std::size_t sample, std::size_t drops, AlignRule expect) -> bool {
    const Sample& s = dataset.samples[sample];
    const auto items = split_answer_items(s.qa.answer);
    const std::u32string target = text::to_u32(text::nfc(items.front()));
    if (target.size() < drops + 1) return false;
    for (int attempt = 0; attempt < 4; ++attempt) {
      Document doc = dataset.documents[idx.at(s.document_id)];
      std::u32string damaged = target;
      for (std::size_t d = 0; d < drops; ++d) {
        const auto at = std::uniform_int_distribution<std::size_t>(0, damaged.size() - 1)(rng);
        damaged.erase(at, 1);
      }
      bool touched = false;
      for (auto& t : doc.tokens) {
        if (text::to_u32(text::nfc(t.text)) == target) {
          t.text = text::to_utf8(damaged);
          touched = true;
        }
      }
      if (!touched) return false;
      if (align_answer(s.qa.answer, build_context(doc)).rule != expect) continue;
      doc.id = s.document_id + "#ocr" + std::to_string(sample);
      out.samples[sample].document_id = doc.id;
      out.samples[sample].span.reset();
      out.documents.push_back(std::move(doc));
      return true;
    }
    return false;
  };

  std::size_t deleted = 0;
  std::size_t unmatched = 0;
  for (auto i : order) {
    if (deleted < want_deletion && corrupt(i, 1, AlignRule::Deletion)) {
      ++deleted;
    } else if (unmatched < want_unmatched && corrupt(i, 2, AlignRule::Unanswerable)) {
      ++unmatched;
    }
    if (deleted == want_deletion && unmatched == want_unmatched) break;
  }
  return out;
}

}  // namespace layoutvqa
