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

#include "layoutvqa/nn.hpp"

#include <cmath>
#include <limits>

namespace layoutvqa::nn {

Mat linear_forward(const Linear& p, const Mat& x) {
  Mat y(x.rows(), p.weight.cols());
  y.noalias() = x * p.weight;
  if (p.bias.size()) y.rowwise() += p.bias.transpose();
  return y;
}

Mat linear_backward(const Linear& p, const Mat& x, const Mat& dy, Linear& grad) {
  grad.weight.noalias() += x.transpose() * dy;
  if (grad.bias.size()) grad.bias += dy.colwise().sum().transpose();
  Mat dx(dy.rows(), p.weight.rows());
  dx.noalias() = dy * p.weight.transpose();
  return dx;
}

Mat layer_norm_forward(const LayerNorm& p, const Mat& x, LayerNormCache* cache) {
  const auto d = static_cast<double>(x.cols());
  Mat normalized(x.rows(), x.cols());
  Vec inv_std(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mean = x.row(r).sum() / d;
    const auto centered = x.row(r).array() - mean;
    const double var = centered.square().sum() / d;
    inv_std(r) = 1.0 / std::sqrt(var + kLayerNormEps);
    normalized.row(r) = centered * inv_std(r);
  }
  Mat y = normalized.array().rowwise() * p.gain.transpose().array();
  if (p.bias.size()) y.rowwise() += p.bias.transpose();
  if (cache) {
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Mat layer_norm_backward(const LayerNorm& p, const LayerNormCache& cache, const Mat& dy,
                        LayerNorm& grad) {
  grad.gain += (dy.array() * cache.normalized.array()).colwise().sum().matrix().transpose();
  if (grad.bias.size()) grad.bias += dy.colwise().sum().transpose();
  const Mat dnorm = dy.array().rowwise() * p.gain.transpose().array();
  const auto d = static_cast<double>(dy.cols());
  Mat dx(dy.rows(), dy.cols());
  for (Eigen::Index r = 0; r < dy.rows(); ++r) {
    const double mean_d = dnorm.row(r).sum() / d;
    const double mean_dx = dnorm.row(r).dot(cache.normalized.row(r)) / d;
    dx.row(r) = cache.inv_std(r) *
                (dnorm.row(r).array() - mean_d - cache.normalized.row(r).array() * mean_dx);
  }
  return dx;
}

Mat softmax_rows(const Mat& logits) {
  Mat out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - m).exp();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

Mat attention_forward(const Attention& p, int heads, const Mat& xq, const Mat& xkv, bool causal,
                      AttentionCache* cache) {
  Mat q = linear_forward(p.query, xq);
  Mat k = linear_forward(p.key, xkv);
  Mat v = linear_forward(p.value, xkv);
  const Eigen::Index d = q.cols();
  const Eigen::Index dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  Mat context(q.rows(), d);
  std::vector<Mat> probs;
  probs.reserve(static_cast<std::size_t>(heads));
  for (int h = 0; h < heads; ++h) {
    Mat scores(q.rows(), k.rows());
    scores.noalias() = q.middleCols(h * dh, dh) * k.middleCols(h * dh, dh).transpose();
    scores *= scale;
    if (causal) {
      for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < scores.cols(); ++j) {
          scores(i, j) = -std::numeric_limits<double>::infinity();
        }
      }
    }
    Mat pr = softmax_rows(scores);
    context.middleCols(h * dh, dh).noalias() = pr * v.middleCols(h * dh, dh);
    probs.push_back(std::move(pr));
  }
  Mat y = linear_forward(p.output, context);
  if (cache) {
    cache->xq = xq;
    cache->xkv = xkv;
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->context = std::move(context);
    cache->probs = std::move(probs);
  }
  return y;
}

void attention_backward(const Attention& p, int heads, const AttentionCache& c, const Mat& dy,
                        Attention& grad, Mat& dxq, Mat& dxkv) {
  const Mat dcontext = linear_backward(p.output, c.context, dy, grad.output);
  const Eigen::Index d = c.q.cols();
  const Eigen::Index dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  Mat dq = Mat::Zero(c.q.rows(), d);
  Mat dk = Mat::Zero(c.k.rows(), d);
  Mat dv = Mat::Zero(c.v.rows(), d);
  for (int h = 0; h < heads; ++h) {
    const Mat& pr = c.probs[static_cast<std::size_t>(h)];
    const auto dch = dcontext.middleCols(h * dh, dh);
    dv.middleCols(h * dh, dh).noalias() = pr.transpose() * dch;
    Mat dprobs(pr.rows(), pr.cols());
    dprobs.noalias() = dch * c.v.middleCols(h * dh, dh).transpose();
    const Eigen::VectorXd row_dot = (dprobs.array() * pr.array()).rowwise().sum();
    Mat dscores = pr.array() * (dprobs.array().colwise() - row_dot.array());
    dscores *= scale;
    dq.middleCols(h * dh, dh).noalias() = dscores * c.k.middleCols(h * dh, dh);
    dk.middleCols(h * dh, dh).noalias() = dscores.transpose() * c.q.middleCols(h * dh, dh);
  }
  dxq = linear_backward(p.query, c.xq, dq, grad.query);
  dxkv = linear_backward(p.key, c.xkv, dk, grad.key);
  dxkv += linear_backward(p.value, c.xkv, dv, grad.value);
}

namespace {
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;
}  // namespace

Mat gelu(const Mat& x) {
  return x.unaryExpr([](double v) {
    return 0.5 * v * (1.0 + std::tanh(kGeluC * (v + kGeluA * v * v * v)));
  });
}

Mat gelu_derivative(const Mat& x) {
  return x.unaryExpr([](double v) {
    const double t = std::tanh(kGeluC * (v + kGeluA * v * v * v));
    return 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * v * v);
  });
}

Mat feed_forward_forward(const FeedForward& p, const Mat& x, FeedForwardCache* cache) {
  Mat pre = linear_forward(p.hidden, x);
  Mat act = gelu(pre);
  Mat y = linear_forward(p.output, act);
  if (cache) {
    cache->x = x;
    cache->pre = std::move(pre);
    cache->act = std::move(act);
  }
  return y;
}

Mat feed_forward_backward(const FeedForward& p, const FeedForwardCache& c, const Mat& dy,
                          FeedForward& grad) {
  const Mat dact = linear_backward(p.output, c.act, dy, grad.output);
  const Mat dpre = dact.array() * gelu_derivative(c.pre).array();
  return linear_backward(p.hidden, c.x, dpre, grad.hidden);
}

}  // namespace layoutvqa::nn
