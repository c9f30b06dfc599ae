// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#include "emojipred/train.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "emojipred/error.hpp"
#include "emojipred/model.hpp"

using emojipred::Error;
using emojipred::ErrorKind;
using emojipred::HeadKind;
using emojipred::LabeledExample;
using emojipred::ModelConfig;
using emojipred::Optimizer;
using emojipred::Parameters;
using emojipred::TrainConfig;
using emojipred::TrainResult;
using emojipred::optimizer_from_string;
using emojipred::train;
using emojipred::train_config_from_json;
using emojipred::train_config_to_json;
using emojipred::train_from;

namespace {

ModelConfig tiny_config(HeadKind kind = HeadKind::MultiClass) {
  ModelConfig c;
  c.layers = 1;
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

// Small separable set: the label is determined by the second token.
std::vector<LabeledExample> separable_set() {
  std::vector<LabeledExample> out;
  for (int rep = 0; rep < 4; ++rep) {
    out.push_back(mc_example({2, 3, static_cast<int32_t>(rep + 1)}, 0));
    out.push_back(mc_example({2, 6, static_cast<int32_t>(rep + 1)}, 1));
    out.push_back(mc_example({2, 9, static_cast<int32_t>(rep + 1)}, 2));
  }
  return out;
}

bool identical(const Parameters& a, const Parameters& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

TEST(TrainConfig_, JsonRoundTrip) {
  TrainConfig c;
  c.learning_rate = 0.01;
  c.epochs = 3;
  c.batch_size = 16;
  c.seed = 77;
  c.optimizer = Optimizer::SGD;
  c.head_only = true;
  const TrainConfig r = train_config_from_json(train_config_to_json(c));
  EXPECT_EQ(r.learning_rate, 0.01);
  EXPECT_EQ(r.epochs, 3u);
  EXPECT_EQ(r.batch_size, 16u);
  EXPECT_EQ(r.seed, 77u);
  EXPECT_EQ(r.optimizer, Optimizer::SGD);
  EXPECT_TRUE(r.head_only);
  EXPECT_EQ(r.adam_beta1, 0.9);
  EXPECT_EQ(r.adam_beta2, 0.999);
  EXPECT_EQ(r.adam_eps, 1e-8);
}

TEST(TrainConfig_, Validation) {
  try {
    optimizer_from_string("rmsprop");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
  TrainConfig c;
  c.learning_rate = -1;
  try {
    c.validate();
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
  TrainConfig b;
  b.batch_size = 0;
  try {
    b.validate();
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(Train, DeterministicForFixedSeed) {
  const ModelConfig mc = tiny_config();
  TrainConfig tc;
  tc.learning_rate = 0.01;
  tc.epochs = 3;
  tc.batch_size = 4;
  tc.seed = 7;
  const std::vector<LabeledExample> data = separable_set();
  const TrainResult a = train(data, data, mc, tc);
  const TrainResult b = train(data, data, mc, tc);
  EXPECT_TRUE(identical(a.params, b.params));
  ASSERT_EQ(a.history.size(), b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].epoch, b.history[i].epoch);
    EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
    EXPECT_EQ(a.history[i].dev_loss, b.history[i].dev_loss);
    EXPECT_EQ(a.history[i].dev_accuracy, b.history[i].dev_accuracy);
  }

  TrainConfig other = tc;
  other.seed = 8;
  const TrainResult c = train(data, data, mc, other);
  EXPECT_FALSE(identical(a.params, c.params));
}

TEST(Train, ZeroLearningRateLeavesParametersAtInit) {
  const ModelConfig mc = tiny_config();
  TrainConfig tc;
  tc.learning_rate = 0.0;
  tc.epochs = 3;
  tc.batch_size = 4;
  tc.seed = 5;
  const std::vector<LabeledExample> data = separable_set();
  const TrainResult r = train(data, {}, mc, tc);

  Parameters expected = Parameters::build(mc);
  expected.init(tc.seed);
  EXPECT_TRUE(identical(r.params, expected));

  // Nothing moves, so the per-epoch mean loss is exactly flat.
  ASSERT_EQ(r.history.size(), 3u);
  EXPECT_EQ(r.history[0].train_loss, r.history[1].train_loss);
  EXPECT_EQ(r.history[1].train_loss, r.history[2].train_loss);
}

TEST(Train, ZeroEpochsReturnsInitialParameters) {
  const ModelConfig mc = tiny_config();
  TrainConfig tc;
  tc.epochs = 0;
  tc.seed = 9;
  const TrainResult r = train(separable_set(), {}, mc, tc);
  Parameters expected = Parameters::build(mc);
  expected.init(tc.seed);
  EXPECT_TRUE(identical(r.params, expected));
  EXPECT_TRUE(r.history.empty());
}

TEST(Train, SgdSingleStepClosedForm) {
  // Zero initial parameters put the whole gradient in the head bias, so one
  // full-batch SGD step has an exact closed form.
  const ModelConfig mc = tiny_config();
  TrainConfig tc;
  tc.learning_rate = 0.1;
  tc.epochs = 1;
  tc.batch_size = 64;
  tc.optimizer = Optimizer::SGD;
  const std::vector<LabeledExample> data = {mc_example({1, 2}, 1)};
  const TrainResult r = train_from(Parameters::build(mc), data, {}, mc, tc);

  const auto bias = r.params.vec("head.bias");
  EXPECT_NEAR(bias[0], -0.1 * (1.0 / 3.0), 1e-14);
  EXPECT_NEAR(bias[1], -0.1 * (1.0 / 3.0 - 1.0), 1e-14);
  EXPECT_NEAR(bias[2], -0.1 * (1.0 / 3.0), 1e-14);
  for (const auto& info : r.params.tensors()) {
    if (info.name == "head.bias") continue;
    for (size_t i = 0; i < info.size; ++i) {
      EXPECT_EQ(r.params[info.offset + i], 0.0) << info.name;
    }
  }
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_NEAR(r.history[0].train_loss, std::log(3.0), 1e-12);
}

TEST(Train, AdamSingleStepApproachesSignedStep) {
  const ModelConfig mc = tiny_config();
  TrainConfig tc;
  tc.learning_rate = 0.01;
  tc.epochs = 1;
  tc.batch_size = 64;
  tc.optimizer = Optimizer::Adam;
  const std::vector<LabeledExample> data = {mc_example({1, 2}, 1)};
  const TrainResult r = train_from(Parameters::build(mc), data, {}, mc, tc);
  // After one bias-corrected step the update is lr * g / (|g| + eps).
  const auto bias = r.params.vec("head.bias");
  EXPECT_NEAR(bias[0], -0.01, 1e-6);  // gradient positive
  EXPECT_NEAR(bias[1], +0.01, 1e-6);  // gradient negative
  EXPECT_NEAR(bias[2], -0.01, 1e-6);
}

TEST(Train, HeadOnlyFreezesEncoder) {
  const ModelConfig mc = tiny_config();
  TrainConfig tc;
  tc.learning_rate = 0.05;
  tc.epochs = 4;
  tc.batch_size = 64;
  tc.seed = 13;
  tc.optimizer = Optimizer::SGD;
  tc.head_only = true;
  const std::vector<LabeledExample> data = separable_set();
  Parameters init = Parameters::build(mc);
  init.init(tc.seed);
  const TrainResult r = train_from(init, data, {}, mc, tc);

  Parameters reference = Parameters::build(mc);
  reference.init(tc.seed);
  bool head_changed = false;
  for (const auto& info : r.params.tensors()) {
    const bool is_head = info.name.rfind("head.", 0) == 0;
    for (size_t i = info.offset; i < info.offset + info.size; ++i) {
      if (is_head) {
        head_changed |= (r.params[i] != reference[i]);
      } else {
        EXPECT_EQ(r.params[i], reference[i]) << info.name;
      }
    }
  }
  EXPECT_TRUE(head_changed);
}

TEST(Train, HeadOnlyFullBatchSgdLossNonIncreasing) {
  // Full-batch gradient descent on the (convex) head-only objective with a
  // small step size must not increase the loss between epochs.
  const ModelConfig mc = tiny_config();
  TrainConfig tc;
  tc.learning_rate = 0.05;
  tc.epochs = 25;
  tc.batch_size = 1024;  // one batch per epoch
  tc.seed = 19;
  tc.optimizer = Optimizer::SGD;
  tc.head_only = true;
  const std::vector<LabeledExample> data = separable_set();
  const TrainResult r = train(data, {}, mc, tc);
  ASSERT_EQ(r.history.size(), 25u);
  for (size_t i = 1; i < r.history.size(); ++i) {
    EXPECT_LE(r.history[i].train_loss, r.history[i - 1].train_loss + 1e-12)
        << "epoch " << i + 1;
  }
  EXPECT_LT(r.history.back().train_loss, r.history.front().train_loss);
}

TEST(Train, LossDecreasesOnSeparableData) {
  const ModelConfig mc = tiny_config();
  TrainConfig tc;
  tc.learning_rate = 0.005;
  tc.epochs = 30;
  tc.batch_size = 4;
  tc.seed = 3;
  const std::vector<LabeledExample> data = separable_set();
  const TrainResult r = train(data, data, mc, tc);
  EXPECT_LT(r.history.back().train_loss, r.history.front().train_loss);
  EXPECT_GE(r.history.back().dev_accuracy, 0.0);
  EXPECT_LE(r.history.back().dev_accuracy, 1.0);
}

TEST(Train, DevAccuracyForMultilabelCountsPerEmojiDecisions) {
  const ModelConfig mc = tiny_config(HeadKind::MultiLabel);
  Parameters params = Parameters::build(mc);  // zero: every score exactly 0.5
  LabeledExample e;
  e.doc.tokens = {1, 2};
  e.label_bits = {1, 0, 1};
  // Scores of exactly 0.5 never pass the strict threshold: predictions are
  // all-absent, so accuracy is the fraction of zero bits.
  const double acc = emojipred::detail::dev_accuracy({e}, params, mc);
  EXPECT_NEAR(acc, 1.0 / 3.0, 1e-15);
}

TEST(Train, MismatchedDatasetsRejected) {
  const ModelConfig mc = tiny_config(HeadKind::MultiClass);
  TrainConfig tc;
  tc.epochs = 1;

  LabeledExample wrong_kind;
  wrong_kind.doc.tokens = {1};
  wrong_kind.label_bits = {1, 0, 1};
  try {
    train({wrong_kind}, {}, mc, tc);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }

  LabeledExample bad_label = mc_example({1}, 7);
  try {
    train({bad_label}, {}, mc, tc);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }

  LabeledExample untokenized;
  untokenized.label = 0;
  try {
    train({untokenized}, {}, mc, tc);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }

  try {
    train({}, {}, mc, tc);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }

  // A bad dev set is caught too.
  const ModelConfig ml = tiny_config(HeadKind::MultiLabel);
  LabeledExample narrow;
  narrow.doc.tokens = {1};
  narrow.label_bits = {1};  // wrong width
  LabeledExample ok;
  ok.doc.tokens = {1};
  ok.label_bits = {1, 0, 0};
  try {
    train({ok}, {narrow}, ml, tc);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(Train, EpochStatsJson) {
  emojipred::EpochStats s;
  s.epoch = 2;
  s.train_loss = 1.5;
  s.dev_loss = 1.25;
  s.dev_accuracy = 0.75;
  const nlohmann::json j = emojipred::epoch_stats_to_json(s);
  EXPECT_EQ(j.at("epoch").get<size_t>(), 2u);
  EXPECT_EQ(j.at("train_loss").get<double>(), 1.5);
  EXPECT_EQ(j.at("dev_loss").get<double>(), 1.25);
  EXPECT_EQ(j.at("dev_accuracy").get<double>(), 0.75);
}
