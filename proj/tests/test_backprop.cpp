// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#include "emojipred/backprop.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "emojipred/error.hpp"
#include "emojipred/loss.hpp"
#include "emojipred/model.hpp"

using emojipred::Error;
using emojipred::ErrorKind;
using emojipred::GradCheckOptions;
using emojipred::HeadKind;
using emojipred::LabeledExample;
using emojipred::ModelConfig;
using emojipred::Parameters;
using emojipred::Vec;
using emojipred::accumulate_gradients;
using emojipred::backprop;
using emojipred::batch_loss;
using emojipred::grad_check;
using emojipred::logits;
using emojipred::loss_multiclass;

namespace {

ModelConfig tiny_config(HeadKind kind = HeadKind::MultiClass) {
  ModelConfig c;
  c.layers = 2;
  c.heads = 2;
  c.hidden = 4;
  c.ffn_dim = 6;
  c.max_seq_len = 8;
  c.word_vocab_size = 11;
  c.label_count = 3;
  c.head_kind = kind;
  return c;
}

LabeledExample mc_example(std::vector<int32_t> tokens, int32_t label) {
  LabeledExample e;
  e.doc.tokens = std::move(tokens);
  e.label = label;
  return e;
}

LabeledExample ml_example(std::vector<int32_t> tokens, std::vector<uint8_t> bits) {
  LabeledExample e;
  e.doc.tokens = std::move(tokens);
  e.label_bits = std::move(bits);
  return e;
}

std::vector<const LabeledExample*> ptrs(const std::vector<LabeledExample>& examples) {
  std::vector<const LabeledExample*> out;
  for (const LabeledExample& e : examples) out.push_back(&e);
  return out;
}

}  // namespace

TEST(Backprop, ZeroParametersConcentrateGradientInHeadBias) {
  // With every parameter at zero the encoder output is identically zero, so
  // the only nonzero gradient is at the head bias: softmax(0) - onehot.
  const ModelConfig c = tiny_config();
  Parameters params = Parameters::build(c);
  Parameters grads = Parameters::build(c);
  const std::vector<LabeledExample> batch = {mc_example({1, 2}, 1)};
  const double loss = backprop(ptrs(batch), params, c, grads);
  EXPECT_NEAR(loss, std::log(3.0), 1e-12);

  const auto& bias_info = grads.info("head.bias");
  for (const auto& info : grads.tensors()) {
    for (size_t i = 0; i < info.size; ++i) {
      const double g = grads[info.offset + i];
      if (info.name == "head.bias") {
        const double expected = 1.0 / 3.0 - (i == 1 ? 1.0 : 0.0);
        EXPECT_NEAR(g, expected, 1e-14) << info.name << "[" << i << "]";
      } else {
        EXPECT_EQ(g, 0.0) << info.name << "[" << i << "]";
      }
    }
  }
  EXPECT_EQ(bias_info.size, 3u);
}

TEST(Backprop, MeanOverBatchIsMeanOfGradients) {
  const ModelConfig c = tiny_config();
  Parameters params = Parameters::build(c);
  params.init(17);
  const std::vector<LabeledExample> singles = {mc_example({1, 2, 3}, 0),
                                               mc_example({4, 5}, 2)};
  Parameters g1 = Parameters::build(c);
  Parameters g2 = Parameters::build(c);
  Parameters gb = Parameters::build(c);
  const double l1 = backprop({&singles[0]}, params, c, g1);
  const double l2 = backprop({&singles[1]}, params, c, g2);
  const double lb = backprop(ptrs(singles), params, c, gb);
  EXPECT_NEAR(lb, 0.5 * (l1 + l2), 1e-12);
  for (size_t i = 0; i < gb.size(); ++i) {
    EXPECT_NEAR(gb[i], 0.5 * (g1[i] + g2[i]), 1e-12);
  }
}

TEST(Backprop, DuplicatedExampleEqualsSingleGradient) {
  const ModelConfig c = tiny_config();
  Parameters params = Parameters::build(c);
  params.init(23);
  const std::vector<LabeledExample> batch = {mc_example({7, 8, 9}, 1),
                                             mc_example({7, 8, 9}, 1)};
  Parameters single = Parameters::build(c);
  Parameters doubled = Parameters::build(c);
  backprop({&batch[0]}, params, c, single);
  backprop(ptrs(batch), params, c, doubled);
  for (size_t i = 0; i < single.size(); ++i) {
    EXPECT_NEAR(doubled[i], single[i], 1e-12);
  }
}

TEST(Backprop, AccumulateScalesLinearly) {
  const ModelConfig c = tiny_config(HeadKind::MultiLabel);
  Parameters params = Parameters::build(c);
  params.init(29);
  const LabeledExample e = ml_example({2, 3, 4}, {1, 0, 1});
  Parameters full = Parameters::build(c);
  Parameters half = Parameters::build(c);
  full.set_zero();
  half.set_zero();
  const double lf = accumulate_gradients(e, params, c, full, 1.0);
  const double lh = accumulate_gradients(e, params, c, half, 0.5);
  EXPECT_DOUBLE_EQ(lf, lh);  // loss unaffected by the scale
  for (size_t i = 0; i < full.size(); ++i) {
    EXPECT_NEAR(half[i], 0.5 * full[i], 1e-13);
  }
}

TEST(Backprop, ReturnsSameLossAsBatchLoss) {
  const ModelConfig c = tiny_config();
  Parameters params = Parameters::build(c);
  params.init(31);
  const std::vector<LabeledExample> batch = {mc_example({1}, 0), mc_example({2, 6}, 2),
                                             mc_example({3, 3, 3}, 1)};
  Parameters grads = Parameters::build(c);
  const double from_backprop = backprop(ptrs(batch), params, c, grads);
  const double from_forward = batch_loss(ptrs(batch), params, c);
  EXPECT_NEAR(from_backprop, from_forward, 1e-12);
}

TEST(Backprop, EmptyBatchRejected) {
  const ModelConfig c = tiny_config();
  Parameters params = Parameters::build(c);
  Parameters grads = Parameters::build(c);
  try {
    backprop({}, params, c, grads);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
  try {
    batch_loss({}, params, c);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
}

TEST(Backprop, MismatchedGradientBundleRejected) {
  const ModelConfig c = tiny_config();
  ModelConfig other = tiny_config();
  other.ffn_dim = 8;
  Parameters params = Parameters::build(c);
  params.init(1);
  Parameters grads = Parameters::build(other);
  const std::vector<LabeledExample> batch = {mc_example({1}, 0)};
  try {
    backprop(ptrs(batch), params, c, grads);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
}

TEST(GradCheck, AnalyticGradientMatchesNumeric) {
  for (const HeadKind kind : {HeadKind::MultiClass, HeadKind::MultiLabel}) {
    const ModelConfig c = tiny_config(kind);
    Parameters params = Parameters::build(c);
    params.init(kind == HeadKind::MultiClass ? 41 : 43);
    std::vector<LabeledExample> batch;
    if (kind == HeadKind::MultiClass) {
      batch = {mc_example({1, 2, 3}, 0), mc_example({4, 5}, 2)};
    } else {
      batch = {ml_example({1, 2, 3}, {1, 0, 1}), ml_example({4, 5}, {0, 1, 0})};
    }
    GradCheckOptions opts;
    opts.eps = 1e-4;
    opts.coordinates = params.size();  // cover every coordinate
    opts.seed = 7;
    const double max_rel = grad_check(ptrs(batch), params, c, opts);
    EXPECT_LT(max_rel, 1e-4) << to_string(kind);
  }
}

TEST(GradCheck, DetectsACorruptedCoordinate) {
  const ModelConfig c = tiny_config();
  Parameters params = Parameters::build(c);
  params.init(53);
  const std::vector<LabeledExample> batch = {mc_example({1, 2, 3}, 1)};

  Parameters corrupted = Parameters::build(c);
  backprop(ptrs(batch), params, c, corrupted);
  // Double the largest-magnitude gradient coordinate.
  size_t worst = 0;
  for (size_t i = 0; i < corrupted.size(); ++i) {
    if (std::abs(corrupted[i]) > std::abs(corrupted[worst])) worst = i;
  }
  ASSERT_GT(std::abs(corrupted[worst]), 1e-3);
  corrupted[worst] *= 2.0;

  GradCheckOptions opts;
  opts.coordinates = params.size();
  opts.analytic_override = &corrupted;
  const double max_rel = grad_check(ptrs(batch), params, c, opts);
  EXPECT_GT(max_rel, 0.3);
}

TEST(GradCheck, LeavesParametersUnchanged) {
  const ModelConfig c = tiny_config();
  Parameters params = Parameters::build(c);
  params.init(59);
  std::vector<double> before(params.data(), params.data() + params.size());
  const std::vector<LabeledExample> batch = {mc_example({1, 2}, 0)};
  GradCheckOptions opts;
  opts.coordinates = 50;
  grad_check(ptrs(batch), params, c, opts);
  for (size_t i = 0; i < params.size(); ++i) {
    EXPECT_EQ(params[i], before[i]);
  }
}

TEST(GradCheck, StepSizeSweepHasInteriorOptimum) {
  // Too-large steps suffer truncation error, too-small ones roundoff; the
  // sweep over step sizes bottoms out strictly inside the range.
  const ModelConfig c = tiny_config();
  Parameters params = Parameters::build(c);
  params.init(61);
  const std::vector<LabeledExample> batch = {mc_example({1, 2, 3, 4}, 2)};
  const std::vector<double> eps_values = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  std::vector<double> errors;
  for (const double eps : eps_values) {
    GradCheckOptions opts;
    opts.eps = eps;
    opts.coordinates = params.size();
    errors.push_back(grad_check(ptrs(batch), params, c, opts));
  }
  size_t best = 0;
  for (size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] < errors[best]) best = i;
  }
  EXPECT_GT(best, 0u) << "best eps at large end";
  EXPECT_LT(best, errors.size() - 1) << "best eps at small end";
  EXPECT_LT(errors[best], 1e-4);
}
