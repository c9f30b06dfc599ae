// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "emojipred/error.hpp"
#include "emojipred/model.hpp"

namespace emojipred {

// Cross-entropy against a one-hot label, evaluated in log space:
// log-sum-exp(logits) - logits[label].
inline double loss_multiclass(const Vec& logit_values, int32_t label) {
  if (!logit_values.allFinite()) {
    throw Error(ErrorKind::Numeric, "multiclass loss over non-finite logits");
  }
  if (label < 0 || label >= logit_values.size()) {
    throw Error(ErrorKind::Shape, "label index out of range");
  }
  const double m = logit_values.maxCoeff();
  const double lse = m + std::log((logit_values.array() - m).exp().sum());
  return lse - logit_values[label];
}

// d(loss)/d(logits) for the multi-class case: softmax - onehot.
inline Vec loss_multiclass_grad(const Vec& logit_values, int32_t label) {
  Vec grad = softmax(logit_values);
  grad[label] -= 1.0;
  return grad;
}

namespace detail {

// log(1 + e^x) without overflow.
inline double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace detail

// Mean over emojis of the binary cross-entropy between each presence score
// sigmoid(z_present - z_absent) and its label bit: with margin d and bit y,
// the per-emoji term is softplus(d) - y*d.
inline double loss_multilabel(const Vec& logit_pairs, const std::vector<uint8_t>& label_bits) {
  if (!logit_pairs.allFinite()) {
    throw Error(ErrorKind::Numeric, "multilabel loss over non-finite logits");
  }
  if (static_cast<size_t>(logit_pairs.size()) != 2 * label_bits.size() || label_bits.empty()) {
    throw Error(ErrorKind::Shape, "logit pair count does not match bitset width");
  }
  double total = 0.0;
  for (size_t e = 0; e < label_bits.size(); ++e) {
    const double d = logit_pairs[2 * e] - logit_pairs[2 * e + 1];
    total += detail::softplus(d) - (label_bits[e] ? d : 0.0);
  }
  return total / static_cast<double>(label_bits.size());
}

// d(loss)/d(logit_pairs): per emoji, (sigma(d) - y)/|E| flows +into the
// present logit and -into the absent logit.
inline Vec loss_multilabel_grad(const Vec& logit_pairs, const std::vector<uint8_t>& label_bits) {
  Vec grad = Vec::Zero(logit_pairs.size());
  const double inv_e = 1.0 / static_cast<double>(label_bits.size());
  for (size_t e = 0; e < label_bits.size(); ++e) {
    const double d = logit_pairs[2 * e] - logit_pairs[2 * e + 1];
    const double g = (sigmoid(d) - (label_bits[e] ? 1.0 : 0.0)) * inv_e;
    grad[2 * e] = g;
    grad[2 * e + 1] = -g;
  }
  return grad;
}

}  // namespace emojipred
