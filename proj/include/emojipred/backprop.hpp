// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "emojipred/dataset.hpp"
#include "emojipred/error.hpp"
#include "emojipred/loss.hpp"
#include "emojipred/model.hpp"
#include "emojipred/rng.hpp"

namespace emojipred {

namespace detail {

inline double example_loss(const LabeledExample& example, const Vec& logit_values,
                           const ModelConfig& config) {
  if (config.head_kind == HeadKind::MultiClass) {
    return loss_multiclass(logit_values, example.label);
  }
  if (example.label_bits.size() != config.label_count) {
    throw Error(ErrorKind::Shape, "example bitset width does not match label count");
  }
  return loss_multilabel(logit_values, example.label_bits);
}

// Backward through one row-wise layer norm. `dout` is the gradient at the
// output; returns the gradient at the input and accumulates into the gain
// and bias gradients.
inline Mat layer_norm_backward(const Mat& dout, const Mat& x, const Vec& mu, const Vec& rstd,
                               Eigen::Map<const Vec> gain, Eigen::Map<Vec> dgain,
                               Eigen::Map<Vec> dbias) {
  const Eigen::Index rows = x.rows(), cols = x.cols();
  Mat dx(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto xhat = ((x.row(r).array() - mu[r]) * rstd[r]).eval();
    dgain.array() += (dout.row(r).array() * xhat).transpose();
    dbias.array() += dout.row(r).transpose().array();
    const auto dxhat = (dout.row(r).array() * gain.transpose().array()).eval();
    const double mean_dxhat = dxhat.mean();
    const double mean_dxhat_xhat = (dxhat * xhat).mean();
    dx.row(r) = (rstd[r] * (dxhat - mean_dxhat - xhat * mean_dxhat_xhat)).matrix();
  }
  return dx;
}

}  // namespace detail

// Forward + reverse pass for one example; adds `scale` times the loss
// gradient into `grads` (which must share the parameter schema) and returns
// the example loss.
inline double accumulate_gradients(const LabeledExample& example, const Parameters& params,
                                   const ModelConfig& config, Parameters& grads,
                                   double scale) {
  ForwardCache cache;
  const Vec logit_values = logits(example.doc, params, config, &cache);
  const double loss = detail::example_loss(example, logit_values, config);

  Vec dlogits = config.head_kind == HeadKind::MultiClass
                    ? loss_multiclass_grad(logit_values, example.label)
                    : loss_multilabel_grad(logit_values, example.label_bits);
  dlogits *= scale;

  // Head.
  grads.mat("head.weight").noalias() += cache.cls * dlogits.transpose();
  grads.vec("head.bias") += dlogits;
  const size_t t_len = example.doc.tokens.size();
  Mat dx = Mat::Zero(t_len, config.hidden);
  dx.row(0) = (params.mat("head.weight") * dlogits).transpose();

  const size_t dk = config.hidden / config.heads;
  const double att_scale = 1.0 / std::sqrt(static_cast<double>(dk));

  for (size_t layer = config.layers; layer-- > 0;) {
    const LayerCache& lc = cache.layers[layer];
    const std::string p = "layer" + std::to_string(layer) + ".";

    // LN2: dx is the gradient at the block output.
    Mat dr2 = detail::layer_norm_backward(dx, lc.r2, lc.ln2_mu, lc.ln2_rstd,
                                          params.vec(p + "ln2.gain"),
                                          grads.vec(p + "ln2.gain"),
                                          grads.vec(p + "ln2.bias"));

    // FFN branch: r2 = y + gelu(y*w1+b1)*w2+b2.
    Mat dy = dr2;  // residual path
    grads.mat(p + "ffn.w2").noalias() += lc.g.transpose() * dr2;
    grads.vec(p + "ffn.b2") += dr2.colwise().sum().transpose();
    Mat dg = dr2 * params.mat(p + "ffn.w2").transpose();
    Mat du = dg.cwiseProduct(lc.u.unaryExpr([](double v) { return detail::gelu_grad(v); }));
    grads.mat(p + "ffn.w1").noalias() += lc.y.transpose() * du;
    grads.vec(p + "ffn.b1") += du.colwise().sum().transpose();
    dy.noalias() += du * params.mat(p + "ffn.w1").transpose();

    // LN1.
    Mat dr1 = detail::layer_norm_backward(dy, lc.r1, lc.ln1_mu, lc.ln1_rstd,
                                          params.vec(p + "ln1.gain"),
                                          grads.vec(p + "ln1.gain"),
                                          grads.vec(p + "ln1.bias"));

    // Attention branch: r1 = x + (concat of head contexts)*wo+bo.
    dx = dr1;  // residual path
    grads.mat(p + "attn.wo").noalias() += lc.attn_concat.transpose() * dr1;
    grads.vec(p + "attn.bo") += dr1.colwise().sum().transpose();
    Mat dconcat = dr1 * params.mat(p + "attn.wo").transpose();

    Mat dq = Mat::Zero(t_len, config.hidden);
    Mat dkmat = Mat::Zero(t_len, config.hidden);
    Mat dv = Mat::Zero(t_len, config.hidden);
    for (size_t head = 0; head < config.heads; ++head) {
      const Mat& probs = lc.attn_probs[head];
      const auto qh = lc.q.middleCols(head * dk, dk);
      const auto kh = lc.k.middleCols(head * dk, dk);
      const auto vh = lc.v.middleCols(head * dk, dk);
      const auto dctx = dconcat.middleCols(head * dk, dk);

      Mat dprobs = dctx * vh.transpose();
      dv.middleCols(head * dk, dk).noalias() += probs.transpose() * dctx;
      // Softmax backward, row by row.
      Mat dscores(probs.rows(), probs.cols());
      for (Eigen::Index r = 0; r < probs.rows(); ++r) {
        const double dot = dprobs.row(r).dot(probs.row(r));
        dscores.row(r) = probs.row(r).cwiseProduct((dprobs.row(r).array() - dot).matrix());
      }
      dq.middleCols(head * dk, dk).noalias() += dscores * kh * att_scale;
      dkmat.middleCols(head * dk, dk).noalias() += dscores.transpose() * qh * att_scale;
    }

    grads.mat(p + "attn.wq").noalias() += lc.x.transpose() * dq;
    grads.vec(p + "attn.bq") += dq.colwise().sum().transpose();
    grads.mat(p + "attn.wk").noalias() += lc.x.transpose() * dkmat;
    grads.vec(p + "attn.bk") += dkmat.colwise().sum().transpose();
    grads.mat(p + "attn.wv").noalias() += lc.x.transpose() * dv;
    grads.vec(p + "attn.bv") += dv.colwise().sum().transpose();
    dx.noalias() += dq * params.mat(p + "attn.wq").transpose();
    dx.noalias() += dkmat * params.mat(p + "attn.wk").transpose();
    dx.noalias() += dv * params.mat(p + "attn.wv").transpose();
  }

  // Embeddings.
  auto dtok = grads.mat("embeddings.token");
  auto dpos = grads.mat("embeddings.position");
  for (size_t t = 0; t < t_len; ++t) {
    dtok.row(example.doc.tokens[t]) += dx.row(t);
    dpos.row(t) += dx.row(t);
  }
  return loss;
}

// Mean-batch loss gradient: `grads` is overwritten with the gradient of the
// mean loss over the batch; the mean loss is returned.
inline double backprop(const std::vector<const LabeledExample*>& batch,
                       const Parameters& params, const ModelConfig& config,
                       Parameters& grads) {
  if (batch.empty()) {
    throw Error(ErrorKind::Shape, "backprop over an empty batch");
  }
  if (!grads.same_shape_as(params)) {
    throw Error(ErrorKind::Shape, "gradient bundle shape does not match parameters");
  }
  grads.set_zero();
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const LabeledExample* example : batch) {
    total += accumulate_gradients(*example, params, config, grads, scale);
  }
  return total * scale;
}

// Mean loss over a batch, forward passes only.
inline double batch_loss(const std::vector<const LabeledExample*>& batch,
                         const Parameters& params, const ModelConfig& config) {
  if (batch.empty()) {
    throw Error(ErrorKind::Shape, "loss over an empty batch");
  }
  double total = 0.0;
  for (const LabeledExample* example : batch) {
    total += detail::example_loss(*example, logits(example->doc, params, config), config);
  }
  return total / static_cast<double>(batch.size());
}

struct GradCheckOptions {
  double eps = 1e-4;
  size_t coordinates = 200;
  uint64_t seed = 0;
  // When set, checked against the numeric gradient instead of a fresh
  // backprop result (lets tests verify the checker catches corruption).
  const Parameters* analytic_override = nullptr;
};

// Central-finite-difference verification of the analytic gradient on a
// sample of coordinates; returns the maximum relative error
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
inline double grad_check(const std::vector<const LabeledExample*>& batch, Parameters& params,
                         const ModelConfig& config, const GradCheckOptions& opts = {}) {
  Parameters analytic = Parameters::build(config);
  if (opts.analytic_override != nullptr) {
    analytic = *opts.analytic_override;
  } else {
    backprop(batch, params, config, analytic);
  }

  Rng rng(opts.seed, "gradcheck");
  std::unordered_set<size_t> coords;
  const size_t want = std::min(opts.coordinates, params.size());
  while (coords.size() < want) {
    coords.insert(rng.next_below(params.size()));
  }

  double max_rel = 0.0;
  for (size_t i : coords) {
    const double original = params[i];
    params[i] = original + opts.eps;
    const double plus = batch_loss(batch, params, config);
    params[i] = original - opts.eps;
    const double minus = batch_loss(batch, params, config);
    params[i] = original;
    const double numeric = (plus - minus) / (2.0 * opts.eps);
    const double a = analytic[i];
    const double rel = std::abs(a - numeric) /
                       std::max({std::abs(a), std::abs(numeric), 1e-8});
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

}  // namespace emojipred
