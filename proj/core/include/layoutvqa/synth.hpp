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

// Synthetic receipt-like documents laid out on a grid, with QA tasks whose
// answers depend on token positions.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layoutvqa/doc_model.hpp"

namespace layoutvqa {

enum class SynthTask {
  QuadrantLookup,  // "which token is in quadrant q ?" for quadrants holding one token
  RightNeighbor,   // "what is right of X ?" where X is duplicated
  RegionValue,     // "list tokens in quadrant q ?" answered as "a <sep> b ..."
};

std::string_view to_string(SynthTask task);
std::optional<SynthTask> parse_synth_task(std::string_view s);

struct SynthConfig {
  std::uint64_t seed = 0;
  int rows = 4;
  int cols = 4;
  std::size_t vocab_size = 32;      // size of the word pool texts are drawn from
  double duplicate_fraction = 0.0;  // ceil(p * n) tokens share text with another token
  SynthTask task = SynthTask::RightNeighbor;
  bool shuffle = false;  // store tokens in random order instead of reading order
  double cell_width = 100.0;
  double cell_height = 40.0;
  double jitter = 0.2;  // total center jitter range, as a fraction of the cell size

  // Throws std::invalid_argument.
  void validate() const;
};

struct GridCell {
  int row = 0;
  int col = 0;
  bool operator==(const GridCell&) const = default;
};

// First `size` entries of a fixed pool of receipt-like words and prices.
std::vector<std::string> word_pool(std::size_t size);

// Grid cell containing the box center.
GridCell grid_cell(const SynthConfig& config, const BoundingBox& box);

// One document from config.seed. For RightNeighbor the text of one duplicate
// group is placed with exactly one copy outside the last column and the other
// copies in the last column.
Document gen_receipt(const SynthConfig& config, std::string id = "receipt-0");

// Every question the task admits on this document (possibly none).
std::vector<QAPair> gen_qa(const SynthConfig& config, const Document& document);

std::string right_neighbor_question(std::string_view anchor);
std::string quadrant_question(int quadrant);
std::string region_question(int quadrant);

// `documents` receipts with per-document seeds derived from config.seed and
// their QA pairs as samples.
Dataset gen_dataset(const SynthConfig& config, std::size_t documents,
                    std::string_view id_prefix = "receipt");

// Best accuracy a predictor can reach on a right-neighbor question from the
// multiset of context texts alone: the answer is uniform over the tokens not
// carrying the anchor text, so the optimum picks the most frequent one.
double right_neighbor_text_only_chance(const Document& document, std::string_view anchor);

// Anchor text of a right-neighbor question, if it has that form.
std::optional<std::string> right_neighbor_anchor(std::string_view question);

// Copies the dataset and simulates OCR character loss: exactly
// round(deletion_fraction * N) samples get a document copy in which one
// character of an answer token is dropped (resolvable only by the deletion
// rule) and round(unmatched_fraction * N) get two characters dropped
// (unresolvable). Samples that cannot be corrupted that way are skipped.
Dataset plant_ocr_errors(const Dataset& dataset, double deletion_fraction,
                         double unmatched_fraction, std::uint64_t seed);

}  // namespace layoutvqa
