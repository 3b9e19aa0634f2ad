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

// Subcommands of the layoutvqa tool. Each writes one JSON record per line to
// `records` and a human-readable summary to `table`; files are only written
// where a path is given.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "layoutvqa/annotator.hpp"
#include "layoutvqa/doc_model.hpp"
#include "layoutvqa/metrics.hpp"
#include "layoutvqa/model.hpp"
#include "layoutvqa/synth.hpp"
#include "layoutvqa/train.hpp"

namespace layoutvqa::cli {

namespace fs = std::filesystem;

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitSchema = 3;
inline constexpr int kExitDivergence = 4;

int exit_code_for(const std::exception& e);

struct Output {
  std::ostream& records;
  std::ostream& table;
};

struct ModelOptions {
  int levels = 4;
  std::size_t max_input_len = kDefaultMaxInputLen;
  double rho_init = 0.5;
  bool text_only = false;
  bool no_ratio = false;
  int d_model = 32;
  int heads = 2;
  int d_ff = 64;
  int encoder_layers = 2;
  int decoder_layers = 2;
  std::size_t max_answer_len = 16;
  double init_std = 0.02;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when both ablation flags are set.
  ModelConfig to_config() const;
};

// "12.34" style, as in the report tables.
std::string percent(double score);

void cmd_hash(const fs::path& documents, int levels, const Output& out);

// Fills question_type and answer_type; writes the annotated samples.
void cmd_classify(const fs::path& samples_in, const fs::path& samples_out, const Output& out);

// Fills span. With reading_order the documents are serialized first.
CoverageStats cmd_align(const fs::path& documents, const fs::path& samples_in,
                        const fs::path& samples_out, bool reading_order, const Output& out);

// Predictions file: one {"prediction": "..."} record per line, aligned with
// the gold samples.
EvalReport cmd_eval(const fs::path& predictions, const fs::path& gold_samples, double tau,
                    const Output& out);

Dataset cmd_synth(const SynthConfig& config, std::size_t documents, const fs::path& documents_out,
                  const fs::path& samples_out, const Output& out);

Model cmd_train(const fs::path& documents, const fs::path& samples, const ModelOptions& model,
                const TrainConfig& train, const fs::path& checkpoint, bool reading_order,
                const Output& out);

// Writes predictions and, since gold answers are known, the metrics.
Evaluation cmd_infer(const fs::path& checkpoint, const fs::path& documents,
                     const fs::path& samples, const fs::path& predictions_out, double tau,
                     bool reading_order, const Output& out);

struct GradCheckOptions {
  ModelOptions model;
  std::size_t examples = 2;
  double h = 1e-5;
  double threshold = 1e-4;
};

// Default model: toy dimensions with a short input, on synthetic examples.
GradCheckOptions default_gradcheck_options();
GradCheckReport cmd_gradcheck(const GradCheckOptions& options, const Output& out);

struct AblationRow {
  int levels = 0;
  LayoutMode mode = LayoutMode::Ratio;
  EvalReport report;
  double omega = 0.0;
  double seconds = 0.0;
};

// Trains one model per (level, ratio setting) on `train` and scores it on
// `test`. The ratio settings are {ratio, no-ratio}.
std::vector<AblationRow> cmd_ablate(const std::vector<int>& levels, const Dataset& train,
                                    const Dataset& test, const ModelOptions& model,
                                    const TrainConfig& train_config, double tau,
                                    const Output& out);

}  // namespace layoutvqa::cli
