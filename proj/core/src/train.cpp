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

#include "layoutvqa/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "layoutvqa/error.hpp"

namespace layoutvqa {

Adam::Adam(const ModelParams& shape, const TrainConfig& config) : config_(config) {
  for (const auto& t : tensors(const_cast<ModelParams&>(shape))) {
    m_.emplace_back(t.size, 0.0);
    v_.emplace_back(t.size, 0.0);
  }
}

void Adam::step(ModelParams& params, ModelParams& grads, double learning_rate) {
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  auto p = tensors(params);
  auto g = tensors(grads);
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t k = 0; k < p[i].size; ++k) {
      const double gk = g[i].data[k];
      m[k] = b1 * m[k] + (1.0 - b1) * gk;
      v[k] = b2 * v[k] + (1.0 - b2) * gk * gk;
      p[i].data[k] -= learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + config_.epsilon);
    }
  }
}

double scheduled_learning_rate(const TrainConfig& c, std::size_t step) {
  if (c.warmup_steps > 0 && step <= c.warmup_steps) {
    return c.learning_rate * static_cast<double>(step) / static_cast<double>(c.warmup_steps);
  }
  if (c.steps <= c.warmup_steps) return c.learning_rate;
  const double remaining = static_cast<double>(c.steps - std::min(step, c.steps));
  return c.learning_rate * remaining / static_cast<double>(c.steps - c.warmup_steps);
}

std::vector<Example> build_examples(const Dataset& dataset, const Vocabulary& vocab,
                                    const ModelConfig& config) {
  const auto idx = dataset.index();
  std::vector<Example> out;
  out.reserve(dataset.samples.size());
  for (const auto& s : dataset.samples) {
    auto it = idx.find(s.document_id);
    if (it == idx.end()) throw SchemaError("unknown document id '" + s.document_id + "'");
    out.push_back(
        make_example(s.qa.question, dataset.documents[it->second], s.qa.answer, vocab, config));
  }
  return out;
}

double mean_omega(const Model& model) {
  const auto omega = effective_omega(model);
  if (!omega) return 0.0;
  return omega->mean();
}

namespace {

double global_norm(ModelParams& grads) {
  double s = 0.0;
  for (const auto& t : tensors(grads)) {
    for (std::size_t k = 0; k < t.size; ++k) s += t.data[k] * t.data[k];
  }
  return std::sqrt(s);
}

void scale_all(ModelParams& grads, double factor) {
  for (auto& t : tensors(grads)) {
    for (std::size_t k = 0; k < t.size; ++k) t.data[k] *= factor;
  }
}

}  // namespace

void train_examples(Model& model, std::span<const Example> examples, const TrainConfig& config,
                    const StepCallback& on_step) {
  if (examples.empty()) throw std::invalid_argument("training set is empty");
  if (config.batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  Adam adam(model.params, config);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t cursor = 0;

  ModelParams grads = zeros_like(model.params);
  std::vector<Example> batch;
  batch.reserve(config.batch_size);
  for (std::size_t step = 1; step <= config.steps; ++step) {
    batch.clear();
    while (batch.size() < config.batch_size) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      batch.push_back(examples[order[cursor++]]);
      if (batch.size() == examples.size()) break;
    }
    set_zero(grads);
    double loss = 0.0;
    try {
      loss = batch_gradient(model, batch, grads, config.threads);
    } catch (const DivergenceError& e) {
      throw DivergenceError("training diverged at step " + std::to_string(step) + ": " + e.what());
    }
    const double norm = global_norm(grads);
    if (!std::isfinite(norm)) {
      throw DivergenceError("non-finite gradient at step " + std::to_string(step));
    }
    if (config.max_grad_norm > 0.0 && norm > config.max_grad_norm) {
      scale_all(grads, config.max_grad_norm / norm);
    }
    const double lr = scheduled_learning_rate(config, step);
    adam.step(model.params, grads, lr);
    if (on_step) on_step({step, loss, lr, mean_omega(model)});
  }
}

Model train(const ModelConfig& model_config, const TrainConfig& train_config,
            const Dataset& dataset, const StepCallback& on_step) {
  if (dataset.samples.empty()) throw std::invalid_argument("training set is empty");
  Model model = init_model(model_config, Vocabulary::build(dataset));
  const auto examples = build_examples(dataset, model.vocab, model.config);
  train_examples(model, examples, train_config, on_step);
  return model;
}

std::vector<TokenId> generate_ids(const Model& model, const TokenizedInput& input,
                                  std::size_t max_len) {
  const Mat encoded = encode(model, input);
  std::vector<TokenId> seq{Vocabulary::kBos};
  const std::size_t limit = std::min(max_len, model.config.max_answer_len - 1);
  std::vector<TokenId> out;
  while (out.size() < limit) {
    const Mat logits = decode(model, encoded, seq);
    Eigen::RowVectorXd last = logits.row(logits.rows() - 1);
    last(Vocabulary::kPad) = -std::numeric_limits<double>::infinity();
    last(Vocabulary::kBos) = -std::numeric_limits<double>::infinity();
    last(Vocabulary::kUnk) = -std::numeric_limits<double>::infinity();
    Eigen::Index best = 0;
    last.maxCoeff(&best);
    const auto id = static_cast<TokenId>(best);
    if (id == Vocabulary::kEos) break;
    out.push_back(id);
    seq.push_back(id);
  }
  return out;
}

std::string generate(const Model& model, const TokenizedInput& input, std::size_t max_len) {
  return detokenize(generate_ids(model, input, max_len), model.vocab);
}

Evaluation evaluate_model(const Model& model, const Dataset& dataset, const EvalConfig& eval_config,
                          unsigned threads) {
  Evaluation ev;
  const auto idx = dataset.index();
  const std::size_t n = dataset.samples.size();
  ev.predictions.resize(n);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      const auto& s = dataset.samples[i];
      const auto& doc = dataset.documents[idx.at(s.document_id)];
      const auto input = tokenize(s.qa.question, doc, model.vocab, model.config.levels,
                                  model.config.max_input_len);
      ev.predictions[i] = generate(model, input, model.config.max_answer_len - 1);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (auto& t : pool) t.join();
  }
  std::vector<AnswerPair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pairs.push_back({ev.predictions[i], dataset.samples[i].qa.answer});
  ev.report = evaluate(pairs, eval_config);
  return ev;
}

}  // namespace layoutvqa
