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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "layoutvqa/doc_model.hpp"
#include "layoutvqa/metrics.hpp"
#include "layoutvqa/model.hpp"

namespace layoutvqa {

struct TrainConfig {
  std::size_t steps = 1000;
  std::size_t batch_size = 16;
  double learning_rate = 1e-3;
  std::size_t warmup_steps = 100;  // linear warmup, then linear decay to 0
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double max_grad_norm = 1.0;  // 0 disables clipping
  std::uint64_t seed = 0;      // batch order
  unsigned threads = 1;
};

struct StepInfo {
  std::size_t step = 0;  // 1-based
  double loss = 0.0;
  double learning_rate = 0.0;
  double omega = 0.0;  // mean gate value, 1 for no-ratio, 0 for text-only
};

using StepCallback = std::function<void(const StepInfo&)>;

class Adam {
 public:
  Adam(const ModelParams& shape, const TrainConfig& config);
  void step(ModelParams& params, ModelParams& grads, double learning_rate);

 private:
  TrainConfig config_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::size_t t_ = 0;
};

double scheduled_learning_rate(const TrainConfig& config, std::size_t step);

// Examples for every sample; the documents are used in their stored order.
std::vector<Example> build_examples(const Dataset& dataset, const Vocabulary& vocab,
                                    const ModelConfig& config);

// Updates the model in place. Throws DivergenceError on a non-finite loss.
void train_examples(Model& model, std::span<const Example> examples, const TrainConfig& config,
                    const StepCallback& on_step = {});

// Builds the vocabulary from the dataset, initializes and trains.
Model train(const ModelConfig& model_config, const TrainConfig& train_config,
            const Dataset& dataset, const StepCallback& on_step = {});

// Greedy decoding from BOS until EOS or max_len generated tokens. PAD, BOS
// and UNK are never emitted.
std::vector<TokenId> generate_ids(const Model& model, const TokenizedInput& input,
                                  std::size_t max_len);
std::string generate(const Model& model, const TokenizedInput& input, std::size_t max_len);

double mean_omega(const Model& model);

struct Evaluation {
  EvalReport report;
  std::vector<std::string> predictions;  // aligned with dataset.samples
};

Evaluation evaluate_model(const Model& model, const Dataset& dataset,
                          const EvalConfig& eval_config = {}, unsigned threads = 1);

}  // namespace layoutvqa
