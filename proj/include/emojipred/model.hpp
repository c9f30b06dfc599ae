// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "emojipred/error.hpp"
#include "emojipred/rng.hpp"
#include "emojipred/word_vocab.hpp"

namespace emojipred {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

enum class HeadKind { MultiClass, MultiLabel };

inline const char* to_string(HeadKind kind) {
  return kind == HeadKind::MultiClass ? "multiclass" : "multilabel";
}

inline HeadKind head_kind_from_string(const std::string& s) {
  if (s == "multiclass") return HeadKind::MultiClass;
  if (s == "multilabel") return HeadKind::MultiLabel;
  throw Error(ErrorKind::Config, "unknown head kind: " + s);
}

// Encoder + head dimensions. Two presets matter: desk_scale() keeps
// gradient checking tractable; bert_base() is the full-size shape.
struct ModelConfig {
  size_t layers = 2;
  size_t heads = 4;
  size_t hidden = 64;
  size_t ffn_dim = 128;
  size_t max_seq_len = 128;
  size_t word_vocab_size = 0;
  size_t label_count = 0;
  HeadKind head_kind = HeadKind::MultiClass;

  static ModelConfig desk_scale() {
    ModelConfig c;
    c.layers = 2;
    c.heads = 4;
    c.hidden = 64;
    c.ffn_dim = 128;
    return c;
  }

  static ModelConfig bert_base() {
    ModelConfig c;
    c.layers = 12;
    c.heads = 12;
    c.hidden = 768;
    c.ffn_dim = 3072;
    c.max_seq_len = 128;
    return c;
  }

  size_t head_out() const {
    return head_kind == HeadKind::MultiClass ? label_count : 2 * label_count;
  }

  void validate() const {
    if (layers < 1 || heads < 1 || hidden < 1 || ffn_dim < 1 || max_seq_len < 1) {
      throw Error(ErrorKind::Config, "model dimensions must all be positive");
    }
    if (hidden % heads != 0) {
      throw Error(ErrorKind::Config,
                  "hidden size " + std::to_string(hidden) + " not divisible by " +
                      std::to_string(heads) + " heads");
    }
    if (word_vocab_size < 1) {
      throw Error(ErrorKind::Config, "word_vocab_size must be positive");
    }
    if (label_count < 1) {
      throw Error(ErrorKind::Config, "label_count must be positive");
    }
  }

  bool operator==(const ModelConfig& other) const = default;
};

inline nlohmann::json model_config_to_json(const ModelConfig& c) {
  return nlohmann::json{
      {"layers", c.layers},         {"heads", c.heads},
      {"hidden", c.hidden},         {"ffn_dim", c.ffn_dim},
      {"max_seq_len", c.max_seq_len}, {"word_vocab_size", c.word_vocab_size},
      {"label_count", c.label_count}, {"head_kind", to_string(c.head_kind)},
  };
}

inline ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.layers = j.at("layers").get<size_t>();
  c.heads = j.at("heads").get<size_t>();
  c.hidden = j.at("hidden").get<size_t>();
  c.ffn_dim = j.at("ffn_dim").get<size_t>();
  c.max_seq_len = j.at("max_seq_len").get<size_t>();
  c.word_vocab_size = j.at("word_vocab_size").get<size_t>();
  c.label_count = j.at("label_count").get<size_t>();
  c.head_kind = head_kind_from_string(j.at("head_kind").get<std::string>());
  return c;
}

// All trainable tensors in one flat double array, addressable by name for
// the forward/backward passes and by flat index for gradient checking. The
// same layout doubles as gradient and optimizer-moment storage.
class Parameters {
 public:
  enum class Init { Uniform, One, Zero };

  struct TensorInfo {
    std::string name;
    size_t offset = 0;
    std::vector<size_t> shape;
    size_t size = 0;
    Init init = Init::Zero;
    size_t fan_in = 0;  // scales Init::Uniform draws by 1/sqrt(fan_in)
  };

  // The tensor schema induced by a config; registration order fixes both
  // the flat layout and the seeded-initialization draw order.
  static std::vector<TensorInfo> schema(const ModelConfig& config) {
    std::vector<TensorInfo> infos;
    size_t offset = 0;
    auto add = [&](std::string name, std::vector<size_t> shape, Init init, size_t fan_in) {
      TensorInfo info;
      info.name = std::move(name);
      info.shape = std::move(shape);
      info.size = 1;
      for (size_t d : info.shape) info.size *= d;
      info.offset = offset;
      info.init = init;
      info.fan_in = fan_in;
      offset += info.size;
      infos.push_back(std::move(info));
    };
    const size_t h = config.hidden;
    add("embeddings.token", {config.word_vocab_size, h}, Init::Uniform, h);
    add("embeddings.position", {config.max_seq_len, h}, Init::Uniform, h);
    for (size_t i = 0; i < config.layers; ++i) {
      const std::string p = "layer" + std::to_string(i) + ".";
      add(p + "attn.wq", {h, h}, Init::Uniform, h);
      add(p + "attn.bq", {h}, Init::Zero, 0);
      add(p + "attn.wk", {h, h}, Init::Uniform, h);
      add(p + "attn.bk", {h}, Init::Zero, 0);
      add(p + "attn.wv", {h, h}, Init::Uniform, h);
      add(p + "attn.bv", {h}, Init::Zero, 0);
      add(p + "attn.wo", {h, h}, Init::Uniform, h);
      add(p + "attn.bo", {h}, Init::Zero, 0);
      add(p + "ln1.gain", {h}, Init::One, 0);
      add(p + "ln1.bias", {h}, Init::Zero, 0);
      add(p + "ffn.w1", {h, config.ffn_dim}, Init::Uniform, h);
      add(p + "ffn.b1", {config.ffn_dim}, Init::Zero, 0);
      add(p + "ffn.w2", {config.ffn_dim, h}, Init::Uniform, config.ffn_dim);
      add(p + "ffn.b2", {h}, Init::Zero, 0);
      add(p + "ln2.gain", {h}, Init::One, 0);
      add(p + "ln2.bias", {h}, Init::Zero, 0);
    }
    add("head.weight", {h, config.head_out()}, Init::Uniform, h);
    add("head.bias", {config.head_out()}, Init::Zero, 0);
    return infos;
  }

  static size_t parameter_count(const ModelConfig& config) {
    const std::vector<TensorInfo> infos = schema(config);
    return infos.empty() ? 0 : infos.back().offset + infos.back().size;
  }

  static Parameters build(const ModelConfig& config) {
    config.validate();
    Parameters params;
    params.tensors_ = schema(config);
    size_t total = 0;
    for (size_t i = 0; i < params.tensors_.size(); ++i) {
      params.index_.emplace(params.tensors_[i].name, i);
      total += params.tensors_[i].size;
    }
    params.data_.assign(total, 0.0);
    return params;
  }

  // Seeded deterministic initialization: weights U(-1/sqrt(fan_in),
  // +1/sqrt(fan_in)), layer-norm gains 1, all biases 0.
  void init(uint64_t seed) {
    Rng rng(seed, "init");
    for (const TensorInfo& info : tensors_) {
      double* t = data_.data() + info.offset;
      switch (info.init) {
        case Init::Zero:
          std::fill(t, t + info.size, 0.0);
          break;
        case Init::One:
          std::fill(t, t + info.size, 1.0);
          break;
        case Init::Uniform: {
          const double s = 1.0 / std::sqrt(static_cast<double>(info.fan_in));
          for (size_t i = 0; i < info.size; ++i) t[i] = rng.next_uniform(-s, s);
          break;
        }
      }
    }
  }

  size_t size() const { return data_.size(); }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  const std::vector<TensorInfo>& tensors() const { return tensors_; }

  const TensorInfo& info(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
      throw Error(ErrorKind::Shape, "unknown tensor: " + std::string(name));
    }
    return tensors_[it->second];
  }

  Eigen::Map<Mat> mat(std::string_view name) {
    const TensorInfo& i = checked(name, 2);
    return Eigen::Map<Mat>(data_.data() + i.offset, i.shape[0], i.shape[1]);
  }
  Eigen::Map<const Mat> mat(std::string_view name) const {
    const TensorInfo& i = checked(name, 2);
    return Eigen::Map<const Mat>(data_.data() + i.offset, i.shape[0], i.shape[1]);
  }
  Eigen::Map<Vec> vec(std::string_view name) {
    const TensorInfo& i = checked(name, 1);
    return Eigen::Map<Vec>(data_.data() + i.offset, i.shape[0]);
  }
  Eigen::Map<const Vec> vec(std::string_view name) const {
    const TensorInfo& i = checked(name, 1);
    return Eigen::Map<const Vec>(data_.data() + i.offset, i.shape[0]);
  }

  void set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

  bool same_shape_as(const Parameters& other) const {
    if (data_.size() != other.data_.size() || tensors_.size() != other.tensors_.size()) {
      return false;
    }
    for (size_t i = 0; i < tensors_.size(); ++i) {
      if (tensors_[i].name != other.tensors_[i].name ||
          tensors_[i].shape != other.tensors_[i].shape) {
        return false;
      }
    }
    return true;
  }

 private:
  const TensorInfo& checked(std::string_view name, size_t rank) const {
    const TensorInfo& i = info(name);
    if (i.shape.size() != rank) {
      throw Error(ErrorKind::Shape, "tensor " + i.name + " has rank " +
                                        std::to_string(i.shape.size()) + ", expected " +
                                        std::to_string(rank));
    }
    return i;
  }

  std::vector<double> data_;
  std::vector<TensorInfo> tensors_;
  std::unordered_map<std::string, size_t> index_;
};

inline constexpr double kLayerNormEps = 1e-5;

namespace detail {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

inline double gelu(double u) { return 0.5 * u * (1.0 + std::erf(u * kInvSqrt2)); }

inline double gelu_grad(double u) {
  const double phi_big = 0.5 * (1.0 + std::erf(u * kInvSqrt2));  // CDF
  const double phi_small = std::exp(-0.5 * u * u) * kInvSqrt2Pi; // PDF
  return phi_big + u * phi_small;
}

// Row-wise layer norm; fills per-row mean and reciprocal stddev for reuse in
// the backward pass.
inline Mat layer_norm(const Mat& x, Eigen::Map<const Vec> gain, Eigen::Map<const Vec> bias,
                      Vec& mu, Vec& rstd) {
  const Eigen::Index rows = x.rows(), cols = x.cols();
  Mat out(rows, cols);
  mu.resize(rows);
  rstd.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double mean = x.row(r).mean();
    const double var = (x.row(r).array() - mean).square().mean();
    const double rs = 1.0 / std::sqrt(var + kLayerNormEps);
    mu[r] = mean;
    rstd[r] = rs;
    out.row(r) = (((x.row(r).array() - mean) * rs) * gain.transpose().array() +
                  bias.transpose().array())
                     .matrix();
  }
  return out;
}

// Numerically stable row softmax.
inline void softmax_rows(Mat& scores) {
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    const double m = scores.row(r).maxCoeff();
    scores.row(r) = (scores.row(r).array() - m).exp().matrix();
    scores.row(r) /= scores.row(r).sum();
  }
}

}  // namespace detail

// Intermediate activations of one encoder block, kept for backprop.
struct LayerCache {
  Mat x;                        // block input [T,H]
  Mat q, k, v;                  // projected (bias included) [T,H]
  std::vector<Mat> attn_probs;  // per head, post-softmax [T,T]
  Mat attn_concat;              // heads' contexts side by side [T,H]
  Mat r1;                       // x + attention output
  Vec ln1_mu, ln1_rstd;
  Mat y;                        // LN1(r1)
  Mat u;                        // FFN pre-activation [T,F]
  Mat g;                        // gelu(u)
  Mat r2;                       // y + FFN output
  Vec ln2_mu, ln2_rstd;
  Mat out;                      // LN2(r2), the block output
};

struct ForwardCache {
  Mat x0;  // token + position embeddings [T,H]
  std::vector<LayerCache> layers;
  Vec cls;
  Vec logit_values;
};

// Full deterministic forward pass; returns the CLS-position representation.
// Pass a cache to keep every intermediate for the backward pass.
inline Vec encode(const Document& doc, const Parameters& params, const ModelConfig& config,
                  ForwardCache* cache = nullptr) {
  config.validate();
  if (doc.tokens.empty()) {
    throw Error(ErrorKind::Shape, "cannot encode an empty document");
  }
  if (doc.tokens.size() > config.max_seq_len) {
    throw Error(ErrorKind::Shape,
                "document length " + std::to_string(doc.tokens.size()) +
                    " exceeds max_seq_len " + std::to_string(config.max_seq_len));
  }
  if (params.size() != Parameters::parameter_count(config)) {
    throw Error(ErrorKind::Shape, "parameter bundle does not match model config");
  }
  const size_t t_len = doc.tokens.size();
  const size_t h = config.hidden;
  const size_t dk = h / config.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

  const auto tok_emb = params.mat("embeddings.token");
  const auto pos_emb = params.mat("embeddings.position");
  Mat x(t_len, h);
  for (size_t t = 0; t < t_len; ++t) {
    const int32_t id = doc.tokens[t];
    if (id < 0 || static_cast<size_t>(id) >= config.word_vocab_size) {
      throw Error(ErrorKind::Shape, "token id " + std::to_string(id) + " out of range");
    }
    x.row(t) = tok_emb.row(id) + pos_emb.row(t);
  }
  if (cache != nullptr) {
    cache->x0 = x;
    cache->layers.clear();
    cache->layers.reserve(config.layers);
  }

  for (size_t layer = 0; layer < config.layers; ++layer) {
    const std::string p = "layer" + std::to_string(layer) + ".";
    LayerCache lc;
    lc.x = x;

    // Multi-head self-attention.
    lc.q = x * params.mat(p + "attn.wq");
    lc.q.rowwise() += params.vec(p + "attn.bq").transpose();
    lc.k = x * params.mat(p + "attn.wk");
    lc.k.rowwise() += params.vec(p + "attn.bk").transpose();
    lc.v = x * params.mat(p + "attn.wv");
    lc.v.rowwise() += params.vec(p + "attn.bv").transpose();
    lc.attn_concat.resize(t_len, h);
    lc.attn_probs.resize(config.heads);
    for (size_t head = 0; head < config.heads; ++head) {
      const auto qh = lc.q.middleCols(head * dk, dk);
      const auto kh = lc.k.middleCols(head * dk, dk);
      const auto vh = lc.v.middleCols(head * dk, dk);
      Mat probs = qh * kh.transpose() * scale;
      detail::softmax_rows(probs);
      lc.attn_concat.middleCols(head * dk, dk) = probs * vh;
      lc.attn_probs[head] = std::move(probs);
    }
    Mat attn_out = lc.attn_concat * params.mat(p + "attn.wo");
    attn_out.rowwise() += params.vec(p + "attn.bo").transpose();

    lc.r1 = x + attn_out;
    lc.y = detail::layer_norm(lc.r1, params.vec(p + "ln1.gain"), params.vec(p + "ln1.bias"),
                              lc.ln1_mu, lc.ln1_rstd);

    // Position-wise feed-forward with exact GELU.
    lc.u = lc.y * params.mat(p + "ffn.w1");
    lc.u.rowwise() += params.vec(p + "ffn.b1").transpose();
    lc.g = lc.u.unaryExpr([](double v) { return detail::gelu(v); });
    Mat ffn_out = lc.g * params.mat(p + "ffn.w2");
    ffn_out.rowwise() += params.vec(p + "ffn.b2").transpose();

    lc.r2 = lc.y + ffn_out;
    lc.out = detail::layer_norm(lc.r2, params.vec(p + "ln2.gain"), params.vec(p + "ln2.bias"),
                                lc.ln2_mu, lc.ln2_rstd);

    x = lc.out;
    if (cache != nullptr) cache->layers.push_back(std::move(lc));
  }

  Vec cls = x.row(0).transpose();
  if (cache != nullptr) cache->cls = cls;
  return cls;
}

// Head logits: |E| values for multi-class, |E|x2 (present, absent)
// interleaved pairs for multi-label.
inline Vec logits(const Document& doc, const Parameters& params, const ModelConfig& config,
                  ForwardCache* cache = nullptr) {
  const Vec cls = encode(doc, params, config, cache);
  Vec out = params.mat("head.weight").transpose() * cls + params.vec("head.bias");
  if (cache != nullptr) cache->logit_values = out;
  return out;
}

// Stable softmax; rejects non-finite inputs.
inline Vec softmax(const Vec& v) {
  if (!v.allFinite()) {
    throw Error(ErrorKind::Numeric, "softmax over non-finite logits");
  }
  const double m = v.maxCoeff();
  Vec e = (v.array() - m).exp().matrix();
  return e / e.sum();
}

inline Vec predict_multiclass(const Document& doc, const Parameters& params,
                              const ModelConfig& config) {
  if (config.head_kind != HeadKind::MultiClass) {
    throw Error(ErrorKind::Shape, "predict_multiclass requires a multiclass head");
  }
  return softmax(logits(doc, params, config));
}

// Indices of the k largest probabilities, descending; ties broken by
// ascending index.
inline std::vector<int32_t> rank_topk(const Vec& probs, size_t k) {
  if (k > static_cast<size_t>(probs.size())) {
    throw Error(ErrorKind::Config,
                "top-k of " + std::to_string(k) + " exceeds label count " +
                    std::to_string(probs.size()));
  }
  std::vector<int32_t> order(static_cast<size_t>(probs.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    if (probs[a] != probs[b]) return probs[a] > probs[b];
    return a < b;
  });
  order.resize(k);
  return order;
}

inline double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// Presence score of emoji e from the interleaved (present, absent) logit
// pairs: sigmoid of the pair's logit margin.
inline double presence_score(const Vec& logit_pairs, size_t e) {
  return sigmoid(logit_pairs[2 * e] - logit_pairs[2 * e + 1]);
}

// Emojis whose presence score strictly exceeds the threshold; may be empty.
inline std::vector<int32_t> predict_multilabel(const Document& doc, const Parameters& params,
                                               const ModelConfig& config,
                                               double threshold = 0.5) {
  if (config.head_kind != HeadKind::MultiLabel) {
    throw Error(ErrorKind::Shape, "predict_multilabel requires a multilabel head");
  }
  const Vec z = logits(doc, params, config);
  std::vector<int32_t> out;
  for (size_t e = 0; e < config.label_count; ++e) {
    if (presence_score(z, e) > threshold) out.push_back(static_cast<int32_t>(e));
  }
  return out;
}

}  // namespace emojipred
