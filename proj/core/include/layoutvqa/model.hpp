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

// Small encoder-decoder transformer whose encoder input embedding carries
// hashed layout letters:
//
//   omega       = sigmoid(rho)
//   E_hash[t]   = omega * mean_i E[letter_i(t)]
//   E_input[t]  = E_semantic[t] + E_hash[t]
//
// where E is the (shared) token embedding table.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layoutvqa/nn.hpp"
#include "layoutvqa/tokenize.hpp"
#include "layoutvqa/vocab.hpp"

namespace layoutvqa {

using nn::Mat;
using nn::Vec;

enum class LayoutMode {
  Ratio,     // E_hash scaled by sigmoid(rho)
  NoRatio,   // E_hash = mean letter embedding, no gate
  TextOnly,  // E_hash = 0
};

std::string_view to_string(LayoutMode mode);
std::optional<LayoutMode> parse_layout_mode(std::string_view s);

struct ModelConfig {
  int d_model = 32;
  int heads = 2;
  int d_ff = 64;
  int encoder_layers = 2;
  int decoder_layers = 2;
  int levels = kDefaultHashLevels;
  std::size_t max_input_len = kDefaultMaxInputLen;
  std::size_t max_answer_len = 16;  // decoder positions, BOS included
  double rho_init = 0.5;
  LayoutMode layout = LayoutMode::Ratio;
  bool per_dim_ratio = false;          // rho as a d_model vector instead of a scalar
  std::optional<double> forced_omega;  // replaces sigmoid(rho) when set
  bool tie_embeddings = false;  // output projection reuses the embedding table
  double init_std = 0.02;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
};

struct EncoderLayer {
  nn::LayerNorm attn_norm;
  nn::Attention self_attn;
  nn::LayerNorm ffn_norm;
  nn::FeedForward ffn;
};

struct DecoderLayer {
  nn::LayerNorm self_norm;
  nn::Attention self_attn;
  nn::LayerNorm cross_norm;
  nn::Attention cross_attn;
  nn::LayerNorm ffn_norm;
  nn::FeedForward ffn;
};

struct ModelParams {
  Mat embedding;          // vocab x d, shared by words, letters and decoder input
  Mat encoder_positions;  // max_input_len x d
  Mat decoder_positions;  // max_answer_len x d
  std::vector<EncoderLayer> encoder;
  nn::LayerNorm encoder_norm;
  std::vector<DecoderLayer> decoder;
  nn::LayerNorm decoder_norm;
  nn::Linear output;  // d x vocab; weight empty when tied to the embedding
  Vec rho;            // size 1, or d when per_dim_ratio
};

// Mutable flat view of one parameter tensor.
struct TensorView {
  std::string name;
  double* data = nullptr;
  std::size_t size = 0;
};

// Every tensor in a fixed order; the order defines the checkpoint layout.
std::vector<TensorView> tensors(ModelParams& params);
std::size_t parameter_count(const ModelParams& params);

// Same shapes, all zeros.
ModelParams zeros_like(const ModelParams& params);
void set_zero(ModelParams& params);

struct Model {
  ModelConfig config;
  Vocabulary vocab;
  ModelParams params;
};

// Gaussian(0, init_std) weights, unit layer-norm gains, zero biases,
// rho = rho_init. Deterministic in config.seed.
Model init_model(const ModelConfig& config, Vocabulary vocab);

// One teacher-forced training example.
struct Example {
  TokenizedInput input;
  std::vector<TokenId> decoder_input;  // BOS, a_1 .. a_k
  std::vector<TokenId> target;         // a_1 .. a_k, EOS
};

Example make_example(std::string_view question, const Document& document, std::string_view answer,
                     const Vocabulary& vocab, const ModelConfig& config);

// Layout letters as vocabulary ids, levels x T.
std::vector<std::vector<TokenId>> letter_ids(const TokenizedInput& input, const Vocabulary& vocab);

Mat embed(const Mat& table, std::span<const TokenId> ids);

// Element-wise mean over levels of the letter embeddings, T x d.
Mat mean_letter_embedding(const std::vector<std::vector<TokenId>>& letters, const Mat& table);

// sigmoid(rho), element-wise.
Vec ratio(const Vec& rho);

// E_semantic + omega * mean letter embedding; omega has size 1 or d.
Mat integrate_layout(const Mat& semantic, const std::vector<std::vector<TokenId>>& letters,
                     const Vec& omega, const Mat& table);

// The gate actually applied for the model's layout mode (empty for TextOnly).
std::optional<Vec> effective_omega(const Model& model);

// Encoder input embedding E_input (before positions are added).
Mat input_embedding(const Model& model, const TokenizedInput& input);

Mat encode(const Model& model, const TokenizedInput& input);
// Logits, decoder_input.size() x vocab.
Mat decode(const Model& model, const Mat& encoded, std::span<const TokenId> decoder_input);
Mat forward(const Model& model, const TokenizedInput& input,
            std::span<const TokenId> decoder_input);

// Mean token cross entropy. Throws DivergenceError when not finite.
double cross_entropy(const Mat& logits, std::span<const TokenId> target);

// Mean cross entropy over the examples.
double batch_loss(const Model& model, std::span<const Example> examples);

// Extra quantities captured by backward() for inspection.
struct BackwardTrace {
  Mat d_input_embedding;  // dLoss/dE_input, T x d
  Mat mean_letters;       // mean letter embedding, T x d
};

// Adds scale * dLoss/dparams for one example into grads and returns its loss.
double backward(const Model& model, const Example& example, ModelParams& grads,
                double scale = 1.0, BackwardTrace* trace = nullptr);

// Gradient of batch_loss. Per-example gradients are reduced in example order,
// so the result does not depend on the thread count.
double batch_gradient(const Model& model, std::span<const Example> examples, ModelParams& grads,
                      unsigned threads = 1);

struct TensorGradCheck {
  std::string name;
  std::size_t size = 0;
  double analytic_norm = 0.0;
  double numeric_norm = 0.0;
  // |analytic - numeric|_2 / max(|analytic|_2 + |numeric|_2, 1e-12)
  double relative_error = 0.0;
  double max_abs_error = 0.0;
};

struct GradCheckReport {
  std::vector<TensorGradCheck> tensors;
  double max_relative_error = 0.0;
  std::size_t parameters = 0;
};

// Central finite differences of batch_loss against the analytic gradient for
// every element of every tensor.
GradCheckReport grad_check(const Model& model, std::span<const Example> examples,
                           double h = 1e-5);

}  // namespace layoutvqa
