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

// Transformer building blocks with hand-written backward passes. Activations
// are row-per-position matrices (T x d). Backward functions accumulate
// parameter gradients into a same-shaped struct and return the input
// gradient.

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace layoutvqa::nn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// y = x * weight + bias, weight is in x out. An empty bias means none.
struct Linear {
  Mat weight;
  Vec bias;
};

struct LayerNorm {
  Vec gain;
  Vec bias;
};

struct Attention {
  Linear query;
  Linear key;  // no bias: it only shifts each score row by a constant
  Linear value;
  Linear output;
};

struct FeedForward {
  Linear hidden;
  Linear output;
};

inline constexpr double kLayerNormEps = 1e-5;

Mat linear_forward(const Linear& p, const Mat& x);
Mat linear_backward(const Linear& p, const Mat& x, const Mat& dy, Linear& grad);

struct LayerNormCache {
  Mat normalized;
  Vec inv_std;
};

Mat layer_norm_forward(const LayerNorm& p, const Mat& x, LayerNormCache* cache);
Mat layer_norm_backward(const LayerNorm& p, const LayerNormCache& cache, const Mat& dy,
                        LayerNorm& grad);

struct AttentionCache {
  Mat xq, xkv;
  Mat q, k, v;
  Mat context;
  std::vector<Mat> probs;  // one Tq x Tk matrix per head
};

// Multi-head scaled dot-product attention. `causal` masks keys after the
// query position.
Mat attention_forward(const Attention& p, int heads, const Mat& xq, const Mat& xkv, bool causal,
                      AttentionCache* cache);
void attention_backward(const Attention& p, int heads, const AttentionCache& cache,
                        const Mat& dy, Attention& grad, Mat& dxq, Mat& dxkv);

struct FeedForwardCache {
  Mat x;
  Mat pre;
  Mat act;
};

// GELU (tanh form) between the two projections.
Mat feed_forward_forward(const FeedForward& p, const Mat& x, FeedForwardCache* cache);
Mat feed_forward_backward(const FeedForward& p, const FeedForwardCache& cache, const Mat& dy,
                          FeedForward& grad);

Mat gelu(const Mat& x);
Mat gelu_derivative(const Mat& x);

// Row-wise softmax, stable against large logits.
Mat softmax_rows(const Mat& logits);

}  // namespace layoutvqa::nn
