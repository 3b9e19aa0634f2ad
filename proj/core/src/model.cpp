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

#include "layoutvqa/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "layoutvqa/error.hpp"

namespace layoutvqa {

std::string_view to_string(LayoutMode mode) {
  switch (mode) {
    case LayoutMode::Ratio:
      return "ratio";
    case LayoutMode::NoRatio:
      return "no-ratio";
    case LayoutMode::TextOnly:
      return "text-only";
  }
  return "ratio";
}

std::optional<LayoutMode> parse_layout_mode(std::string_view s) {
  if (s == "ratio") return LayoutMode::Ratio;
  if (s == "no-ratio") return LayoutMode::NoRatio;
  if (s == "text-only") return LayoutMode::TextOnly;
  return std::nullopt;
}

void ModelConfig::validate() const {
  if (d_model <= 0 || heads <= 0 || d_model % heads != 0) {
    throw std::invalid_argument("d_model must be a positive multiple of heads");
  }
  if (d_ff <= 0 || encoder_layers < 0 || decoder_layers < 0) {
    throw std::invalid_argument("invalid layer dimensions");
  }
  if (levels < 1 || levels > kMaxHashLevels) {
    throw std::invalid_argument("levels must be in 1.." + std::to_string(kMaxHashLevels));
  }
  if (max_input_len == 0 || max_answer_len < 2) {
    throw std::invalid_argument("max_input_len must be >= 1 and max_answer_len >= 2");
  }
  if (!std::isfinite(rho_init)) throw std::invalid_argument("rho_init must be finite");
  if (forced_omega && !std::isfinite(*forced_omega)) {
    throw std::invalid_argument("forced omega must be finite");
  }
}

// ---------------------------------------------------------------------------
// Parameter plumbing

namespace {

void add_linear(std::vector<TensorView>& out, const std::string& name, nn::Linear& l) {
  if (l.weight.size()) {
    out.push_back({name + ".weight", l.weight.data(), static_cast<std::size_t>(l.weight.size())});
  }
  if (l.bias.size()) {
    out.push_back({name + ".bias", l.bias.data(), static_cast<std::size_t>(l.bias.size())});
  }
}

void add_norm(std::vector<TensorView>& out, const std::string& name, nn::LayerNorm& n) {
  out.push_back({name + ".gain", n.gain.data(), static_cast<std::size_t>(n.gain.size())});
  out.push_back({name + ".bias", n.bias.data(), static_cast<std::size_t>(n.bias.size())});
}

void add_attention(std::vector<TensorView>& out, const std::string& name, nn::Attention& a) {
  add_linear(out, name + ".query", a.query);
  add_linear(out, name + ".key", a.key);
  add_linear(out, name + ".value", a.value);
  add_linear(out, name + ".output", a.output);
}

void add_ffn(std::vector<TensorView>& out, const std::string& name, nn::FeedForward& f) {
  add_linear(out, name + ".hidden", f.hidden);
  add_linear(out, name + ".output", f.output);
}

}  // namespace

std::vector<TensorView> tensors(ModelParams& p) {
  std::vector<TensorView> out;
  out.push_back({"embedding", p.embedding.data(), static_cast<std::size_t>(p.embedding.size())});
  out.push_back({"encoder_positions", p.encoder_positions.data(),
                 static_cast<std::size_t>(p.encoder_positions.size())});
  out.push_back({"decoder_positions", p.decoder_positions.data(),
                 static_cast<std::size_t>(p.decoder_positions.size())});
  for (std::size_t i = 0; i < p.encoder.size(); ++i) {
    const std::string base = "encoder." + std::to_string(i);
    add_norm(out, base + ".attn_norm", p.encoder[i].attn_norm);
    add_attention(out, base + ".self_attn", p.encoder[i].self_attn);
    add_norm(out, base + ".ffn_norm", p.encoder[i].ffn_norm);
    add_ffn(out, base + ".ffn", p.encoder[i].ffn);
  }
  add_norm(out, "encoder_norm", p.encoder_norm);
  for (std::size_t i = 0; i < p.decoder.size(); ++i) {
    const std::string base = "decoder." + std::to_string(i);
    add_norm(out, base + ".self_norm", p.decoder[i].self_norm);
    add_attention(out, base + ".self_attn", p.decoder[i].self_attn);
    add_norm(out, base + ".cross_norm", p.decoder[i].cross_norm);
    add_attention(out, base + ".cross_attn", p.decoder[i].cross_attn);
    add_norm(out, base + ".ffn_norm", p.decoder[i].ffn_norm);
    add_ffn(out, base + ".ffn", p.decoder[i].ffn);
  }
  add_norm(out, "decoder_norm", p.decoder_norm);
  add_linear(out, "output", p.output);
  out.push_back({"rho", p.rho.data(), static_cast<std::size_t>(p.rho.size())});
  return out;
}

std::size_t parameter_count(const ModelParams& params) {
  std::size_t n = 0;
  for (const auto& t : tensors(const_cast<ModelParams&>(params))) n += t.size;
  return n;
}

ModelParams zeros_like(const ModelParams& params) {
  ModelParams z = params;
  set_zero(z);
  return z;
}

void set_zero(ModelParams& params) {
  for (auto& t : tensors(params)) std::fill(t.data, t.data + t.size, 0.0);
}

namespace {

class Initializer {
 public:
  Initializer(std::uint64_t seed, double stddev) : rng_(seed), dist_(0.0, stddev) {}

  Mat gaussian(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    // Fill row by row so the draw order does not depend on storage order.
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist_(rng_);
    }
    return m;
  }

  nn::Linear linear(Eigen::Index in, Eigen::Index out) {
    return {gaussian(in, out), Vec::Zero(out)};
  }

  static nn::LayerNorm norm(Eigen::Index d) { return {Vec::Ones(d), Vec::Zero(d)}; }

  nn::Attention attention(Eigen::Index d) {
    nn::Linear key = linear(d, d);
    key.bias.resize(0);
    return {linear(d, d), std::move(key), linear(d, d), linear(d, d)};
  }

  nn::FeedForward ffn(Eigen::Index d, Eigen::Index dff) { return {linear(d, dff), linear(dff, d)}; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_;
};

}  // namespace

Model init_model(const ModelConfig& config, Vocabulary vocab) {
  config.validate();
  Initializer init(config.seed, config.init_std);
  const Eigen::Index d = config.d_model;
  const auto v = static_cast<Eigen::Index>(vocab.size());
  ModelParams p;
  p.embedding = init.gaussian(v, d);
  p.encoder_positions = init.gaussian(static_cast<Eigen::Index>(config.max_input_len), d);
  p.decoder_positions = init.gaussian(static_cast<Eigen::Index>(config.max_answer_len), d);
  for (int i = 0; i < config.encoder_layers; ++i) {
    EncoderLayer l;
    l.attn_norm = Initializer::norm(d);
    l.self_attn = init.attention(d);
    l.ffn_norm = Initializer::norm(d);
    l.ffn = init.ffn(d, config.d_ff);
    p.encoder.push_back(std::move(l));
  }
  p.encoder_norm = Initializer::norm(d);
  for (int i = 0; i < config.decoder_layers; ++i) {
    DecoderLayer l;
    l.self_norm = Initializer::norm(d);
    l.self_attn = init.attention(d);
    l.cross_norm = Initializer::norm(d);
    l.cross_attn = init.attention(d);
    l.ffn_norm = Initializer::norm(d);
    l.ffn = init.ffn(d, config.d_ff);
    p.decoder.push_back(std::move(l));
  }
  p.decoder_norm = Initializer::norm(d);
  p.output = init.linear(d, v);
  if (config.tie_embeddings) p.output.weight.resize(0, 0);
  p.rho = Vec::Constant(config.per_dim_ratio ? d : 1, config.rho_init);
  return {config, std::move(vocab), std::move(p)};
}

Example make_example(std::string_view question, const Document& document, std::string_view answer,
                     const Vocabulary& vocab, const ModelConfig& config) {
  Example ex;
  ex.input = tokenize(question, document, vocab, config.levels, config.max_input_len);
  auto words = encode_words(answer, vocab);
  if (words.size() > config.max_answer_len - 1) words.resize(config.max_answer_len - 1);
  ex.decoder_input.push_back(Vocabulary::kBos);
  ex.decoder_input.insert(ex.decoder_input.end(), words.begin(), words.end());
  ex.target = words;
  ex.target.push_back(Vocabulary::kEos);
  return ex;
}

// ---------------------------------------------------------------------------
// Layout integration

std::vector<std::vector<TokenId>> letter_ids(const TokenizedInput& input,
                                             const Vocabulary& vocab) {
  std::vector<std::vector<TokenId>> out(input.letters.size());
  for (std::size_t i = 0; i < input.letters.size(); ++i) {
    out[i].reserve(input.letters[i].size());
    for (char c : input.letters[i]) out[i].push_back(vocab.letter_id(c));
  }
  return out;
}

Mat embed(const Mat& table, std::span<const TokenId> ids) {
  Mat out(static_cast<Eigen::Index>(ids.size()), table.cols());
  for (std::size_t t = 0; t < ids.size(); ++t) {
    out.row(static_cast<Eigen::Index>(t)) = table.row(ids[t]);
  }
  return out;
}

Mat mean_letter_embedding(const std::vector<std::vector<TokenId>>& letters, const Mat& table) {
  if (letters.empty()) throw std::invalid_argument("mean_letter_embedding needs >= 1 level");
  const auto T = static_cast<Eigen::Index>(letters.front().size());
  Mat sum = Mat::Zero(T, table.cols());
  for (const auto& level : letters) {
    for (Eigen::Index t = 0; t < T; ++t) sum.row(t) += table.row(level[static_cast<std::size_t>(t)]);
  }
  return sum / static_cast<double>(letters.size());
}

Vec ratio(const Vec& rho) {
  return rho.unaryExpr([](double r) { return 1.0 / (1.0 + std::exp(-r)); });
}

namespace {

Mat gate(const Mat& mean, const Vec& omega) {
  if (omega.size() == 1) return mean * omega(0);
  return mean.array().rowwise() * omega.transpose().array();
}

}  // namespace

Mat integrate_layout(const Mat& semantic, const std::vector<std::vector<TokenId>>& letters,
                     const Vec& omega, const Mat& table) {
  return semantic + gate(mean_letter_embedding(letters, table), omega);
}

std::optional<Vec> effective_omega(const Model& model) {
  const auto& cfg = model.config;
  switch (cfg.layout) {
    case LayoutMode::TextOnly:
      return std::nullopt;
    case LayoutMode::NoRatio:
      return Vec::Ones(1);
    case LayoutMode::Ratio:
      if (cfg.forced_omega) return Vec::Constant(1, *cfg.forced_omega);
      return ratio(model.params.rho);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Forward with caches

namespace {

struct EncoderLayerCache {
  nn::LayerNormCache attn_norm;
  nn::AttentionCache attn;
  nn::LayerNormCache ffn_norm;
  nn::FeedForwardCache ffn;
};

struct DecoderLayerCache {
  nn::LayerNormCache self_norm;
  nn::AttentionCache self_attn;
  nn::LayerNormCache cross_norm;
  nn::AttentionCache cross_attn;
  nn::LayerNormCache ffn_norm;
  nn::FeedForwardCache ffn;
};

struct ForwardCache {
  std::vector<std::vector<TokenId>> letters;
  Mat mean_letters;
  std::vector<EncoderLayerCache> encoder;
  nn::LayerNormCache encoder_norm;
  Mat encoded;
  std::vector<DecoderLayerCache> decoder;
  nn::LayerNormCache decoder_norm;
  Mat decoder_out;
};

Mat input_embedding_impl(const Model& model, const TokenizedInput& input, ForwardCache* cache) {
  const auto& table = model.params.embedding;
  Mat x = embed(table, input.ids);
  if (model.config.layout == LayoutMode::TextOnly) return x;
  auto letters = letter_ids(input, model.vocab);
  Mat mean = mean_letter_embedding(letters, table);
  if (model.config.layout == LayoutMode::NoRatio) {
    x += mean;
  } else {
    x += gate(mean, *effective_omega(model));
  }
  if (cache) {
    cache->letters = std::move(letters);
    cache->mean_letters = std::move(mean);
  }
  return x;
}

Mat encode_impl(const Model& model, const TokenizedInput& input, ForwardCache* cache) {
  const auto& p = model.params;
  const int heads = model.config.heads;
  if (input.ids.empty()) throw std::invalid_argument("empty encoder input");
  if (input.ids.size() > static_cast<std::size_t>(p.encoder_positions.rows())) {
    throw std::invalid_argument("encoder input longer than max_input_len");
  }
  const auto T = static_cast<Eigen::Index>(input.ids.size());
  Mat x = input_embedding_impl(model, input, cache);
  x += p.encoder_positions.topRows(T);
  if (cache) cache->encoder.resize(p.encoder.size());
  for (std::size_t i = 0; i < p.encoder.size(); ++i) {
    const auto& l = p.encoder[i];
    EncoderLayerCache* c = cache ? &cache->encoder[i] : nullptr;
    const Mat a = nn::layer_norm_forward(l.attn_norm, x, c ? &c->attn_norm : nullptr);
    x += nn::attention_forward(l.self_attn, heads, a, a, false, c ? &c->attn : nullptr);
    const Mat b = nn::layer_norm_forward(l.ffn_norm, x, c ? &c->ffn_norm : nullptr);
    x += nn::feed_forward_forward(l.ffn, b, c ? &c->ffn : nullptr);
  }
  Mat encoded = nn::layer_norm_forward(p.encoder_norm, x, cache ? &cache->encoder_norm : nullptr);
  if (cache) cache->encoded = encoded;
  return encoded;
}

// Tied to the embedding table when the output weight is empty.
Mat output_logits(const ModelParams& p, const Mat& hidden) {
  if (p.output.weight.size()) return nn::linear_forward(p.output, hidden);
  Mat logits(hidden.rows(), p.embedding.rows());
  logits.noalias() = hidden * p.embedding.transpose();
  logits.rowwise() += p.output.bias.transpose();
  return logits;
}

Mat decode_impl(const Model& model, const Mat& encoded, std::span<const TokenId> decoder_input,
                ForwardCache* cache) {
  const auto& p = model.params;
  const int heads = model.config.heads;
  if (decoder_input.empty()) throw std::invalid_argument("empty decoder input");
  if (decoder_input.size() > static_cast<std::size_t>(p.decoder_positions.rows())) {
    throw std::invalid_argument("decoder input longer than max_answer_len");
  }
  const auto n = static_cast<Eigen::Index>(decoder_input.size());
  Mat y = embed(p.embedding, decoder_input);
  y += p.decoder_positions.topRows(n);
  if (cache) cache->decoder.resize(p.decoder.size());
  for (std::size_t i = 0; i < p.decoder.size(); ++i) {
    const auto& l = p.decoder[i];
    DecoderLayerCache* c = cache ? &cache->decoder[i] : nullptr;
    const Mat a = nn::layer_norm_forward(l.self_norm, y, c ? &c->self_norm : nullptr);
    y += nn::attention_forward(l.self_attn, heads, a, a, true, c ? &c->self_attn : nullptr);
    const Mat b = nn::layer_norm_forward(l.cross_norm, y, c ? &c->cross_norm : nullptr);
    y += nn::attention_forward(l.cross_attn, heads, b, encoded, false,
                               c ? &c->cross_attn : nullptr);
    const Mat f = nn::layer_norm_forward(l.ffn_norm, y, c ? &c->ffn_norm : nullptr);
    y += nn::feed_forward_forward(l.ffn, f, c ? &c->ffn : nullptr);
  }
  Mat out = nn::layer_norm_forward(p.decoder_norm, y, cache ? &cache->decoder_norm : nullptr);
  Mat logits = output_logits(p, out);
  if (cache) cache->decoder_out = std::move(out);
  return logits;
}

}  // namespace

Mat input_embedding(const Model& model, const TokenizedInput& input) {
  return input_embedding_impl(model, input, nullptr);
}

Mat encode(const Model& model, const TokenizedInput& input) {
  return encode_impl(model, input, nullptr);
}

Mat decode(const Model& model, const Mat& encoded, std::span<const TokenId> decoder_input) {
  return decode_impl(model, encoded, decoder_input, nullptr);
}

Mat forward(const Model& model, const TokenizedInput& input,
            std::span<const TokenId> decoder_input) {
  return decode(model, encode(model, input), decoder_input);
}

double cross_entropy(const Mat& logits, std::span<const TokenId> target) {
  if (static_cast<std::size_t>(logits.rows()) != target.size()) {
    throw std::invalid_argument("logits/target length mismatch");
  }
  double total = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    const double lse = m + std::log((logits.row(r).array() - m).exp().sum());
    total += lse - logits(r, target[static_cast<std::size_t>(r)]);
  }
  const double loss = total / static_cast<double>(logits.rows());
  if (!std::isfinite(loss)) throw DivergenceError("non-finite loss");
  return loss;
}

double batch_loss(const Model& model, std::span<const Example> examples) {
  if (examples.empty()) throw std::invalid_argument("empty batch");
  double sum = 0.0;
  for (const auto& ex : examples) {
    sum += cross_entropy(forward(model, ex.input, ex.decoder_input), ex.target);
  }
  return sum / static_cast<double>(examples.size());
}

// ---------------------------------------------------------------------------
// Backward

namespace {

void scatter_rows(Mat& table_grad, std::span<const TokenId> ids, const Mat& d) {
  for (std::size_t t = 0; t < ids.size(); ++t) {
    table_grad.row(ids[t]) += d.row(static_cast<Eigen::Index>(t));
  }
}

}  // namespace

double backward(const Model& model, const Example& ex, ModelParams& g, double scale,
                BackwardTrace* trace) {
  const auto& p = model.params;
  const int heads = model.config.heads;
  ForwardCache cache;
  const Mat encoded = encode_impl(model, ex.input, &cache);
  const Mat logits = decode_impl(model, encoded, ex.decoder_input, &cache);
  const double loss = cross_entropy(logits, ex.target);

  // dLoss/dlogits for the mean over positions.
  Mat dlogits = nn::softmax_rows(logits);
  for (std::size_t r = 0; r < ex.target.size(); ++r) {
    dlogits(static_cast<Eigen::Index>(r), ex.target[r]) -= 1.0;
  }
  dlogits *= scale / static_cast<double>(ex.target.size());

  Mat dy;
  if (p.output.weight.size()) {
    dy = nn::linear_backward(p.output, cache.decoder_out, dlogits, g.output);
  } else {
    g.embedding.noalias() += dlogits.transpose() * cache.decoder_out;
    g.output.bias += dlogits.colwise().sum().transpose();
    dy.noalias() = dlogits * p.embedding;
  }
  dy = nn::layer_norm_backward(p.decoder_norm, cache.decoder_norm, dy, g.decoder_norm);
  Mat dencoded = Mat::Zero(encoded.rows(), encoded.cols());
  Mat dq, dkv;
  for (std::size_t i = p.decoder.size(); i-- > 0;) {
    const auto& l = p.decoder[i];
    auto& lg = g.decoder[i];
    const auto& c = cache.decoder[i];
    dy += nn::layer_norm_backward(l.ffn_norm, c.ffn_norm,
                                  nn::feed_forward_backward(l.ffn, c.ffn, dy, lg.ffn), lg.ffn_norm);
    nn::attention_backward(l.cross_attn, heads, c.cross_attn, dy, lg.cross_attn, dq, dkv);
    dencoded += dkv;
    dy += nn::layer_norm_backward(l.cross_norm, c.cross_norm, dq, lg.cross_norm);
    nn::attention_backward(l.self_attn, heads, c.self_attn, dy, lg.self_attn, dq, dkv);
    dq += dkv;
    dy += nn::layer_norm_backward(l.self_norm, c.self_norm, dq, lg.self_norm);
  }
  const auto n_dec = static_cast<Eigen::Index>(ex.decoder_input.size());
  g.decoder_positions.topRows(n_dec) += dy;
  scatter_rows(g.embedding, ex.decoder_input, dy);

  Mat dx = nn::layer_norm_backward(p.encoder_norm, cache.encoder_norm, dencoded, g.encoder_norm);
  for (std::size_t i = p.encoder.size(); i-- > 0;) {
    const auto& l = p.encoder[i];
    auto& lg = g.encoder[i];
    const auto& c = cache.encoder[i];
    dx += nn::layer_norm_backward(l.ffn_norm, c.ffn_norm,
                                  nn::feed_forward_backward(l.ffn, c.ffn, dx, lg.ffn), lg.ffn_norm);
    nn::attention_backward(l.self_attn, heads, c.attn, dx, lg.self_attn, dq, dkv);
    dq += dkv;
    dx += nn::layer_norm_backward(l.attn_norm, c.attn_norm, dq, lg.attn_norm);
  }
  const auto T = static_cast<Eigen::Index>(ex.input.ids.size());
  g.encoder_positions.topRows(T) += dx;
  scatter_rows(g.embedding, ex.input.ids, dx);

  // Layout channel: dE_hash = dE_input.
  const auto layout = model.config.layout;
  if (layout != LayoutMode::TextOnly) {
    Vec omega = Vec::Ones(1);
    if (layout == LayoutMode::Ratio) omega = *effective_omega(model);
    const Mat dmean = gate(dx, omega) / static_cast<double>(cache.letters.size());
    for (const auto& level : cache.letters) scatter_rows(g.embedding, level, dmean);
    if (layout == LayoutMode::Ratio && !model.config.forced_omega) {
      const Vec sig = omega;
      if (sig.size() == 1) {
        g.rho(0) += sig(0) * (1.0 - sig(0)) * (dx.array() * cache.mean_letters.array()).sum();
      } else {
        const Vec per_dim = (dx.array() * cache.mean_letters.array()).colwise().sum().transpose();
        g.rho.array() += sig.array() * (1.0 - sig.array()) * per_dim.array();
      }
    }
  }
  if (trace) {
    trace->d_input_embedding = dx;
    trace->mean_letters = cache.mean_letters;
  }
  return loss;
}

namespace {

void add_into(ModelParams& dst, ModelParams& src) {
  auto d = tensors(dst);
  auto s = tensors(src);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t k = 0; k < d[i].size; ++k) d[i].data[k] += s[i].data[k];
  }
}

}  // namespace

double batch_gradient(const Model& model, std::span<const Example> examples, ModelParams& grads,
                      unsigned threads) {
  if (examples.empty()) throw std::invalid_argument("empty batch");
  const std::size_t n = examples.size();
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<ModelParams> per_example(n, zeros_like(model.params));
  std::vector<double> losses(n, 0.0);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      try {
        losses[i] = backward(model, examples[i], per_example[i], scale);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    add_into(grads, per_example[i]);
    loss += losses[i];
  }
  return loss * scale;
}

GradCheckReport grad_check(const Model& model, std::span<const Example> examples, double h) {
  Model probe = model;
  ModelParams analytic = zeros_like(model.params);
  batch_gradient(model, examples, analytic, 1);

  GradCheckReport report;
  auto params = tensors(probe.params);
  auto grads = tensors(analytic);
  for (std::size_t i = 0; i < params.size(); ++i) {
    TensorGradCheck tc;
    tc.name = params[i].name;
    tc.size = params[i].size;
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (std::size_t k = 0; k < params[i].size; ++k) {
      double& w = params[i].data[k];
      const double saved = w;
      w = saved + h;
      const double up = batch_loss(probe, examples);
      w = saved - h;
      const double down = batch_loss(probe, examples);
      w = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = grads[i].data[k];
      diff2 += (a - numeric) * (a - numeric);
      a2 += a * a;
      n2 += numeric * numeric;
      tc.max_abs_error = std::max(tc.max_abs_error, std::abs(a - numeric));
    }
    tc.analytic_norm = std::sqrt(a2);
    tc.numeric_norm = std::sqrt(n2);
    tc.relative_error = std::sqrt(diff2) / std::max(tc.analytic_norm + tc.numeric_norm, 1e-12);
    report.max_relative_error = std::max(report.max_relative_error, tc.relative_error);
    report.parameters += tc.size;
    report.tensors.push_back(std::move(tc));
  }
  return report;
}

}  // namespace layoutvqa
