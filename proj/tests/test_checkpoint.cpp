// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#include "emojipred/checkpoint.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "emojipred/error.hpp"
#include "emojipred/model.hpp"
#include "emojipred/train.hpp"
#include "test_util.hpp"

using emojipred::Checkpoint;
using emojipred::Error;
using emojipred::ErrorKind;
using emojipred::HeadKind;
using emojipred::ModelConfig;
using emojipred::Parameters;
using emojipred::TrainConfig;
using emojipred::load_checkpoint;
using emojipred::save_checkpoint;

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

Checkpoint make_checkpoint() {
  Checkpoint ckpt;
  ckpt.model_config = tiny_config();
  TrainConfig tc;
  tc.learning_rate = 0.001;
  tc.epochs = 2;
  tc.seed = 5;
  ckpt.train_config = tc;
  ckpt.seed = 5;
  ckpt.word_vocab_hash = "0123456789abcdef";
  ckpt.emoji_vocab_hash = "fedcba9876543210";
  ckpt.unicode_version = "14.0";
  ckpt.params = Parameters::build(ckpt.model_config);
  ckpt.params.init(5);
  return ckpt;
}

}  // namespace

TEST(Checkpoint_, RoundTripPreservesEverythingAtFloatPrecision) {
  testutil::TempDir dir("ckpt");
  const std::string path = dir.str("model.bin");
  const Checkpoint original = make_checkpoint();
  save_checkpoint(path, original);
  const Checkpoint loaded = load_checkpoint(path);

  EXPECT_EQ(loaded.model_config, original.model_config);
  ASSERT_TRUE(loaded.train_config.has_value());
  EXPECT_EQ(loaded.train_config->learning_rate, 0.001);
  EXPECT_EQ(loaded.train_config->epochs, 2u);
  EXPECT_EQ(loaded.seed, 5u);
  EXPECT_EQ(loaded.word_vocab_hash, "0123456789abcdef");
  EXPECT_EQ(loaded.emoji_vocab_hash, "fedcba9876543210");
  EXPECT_EQ(loaded.unicode_version, "14.0");
  EXPECT_EQ(loaded.toolkit_version, emojipred::kToolkitVersion);

  // Parameters survive exactly at float32 resolution.
  ASSERT_EQ(loaded.params.size(), original.params.size());
  for (size_t i = 0; i < original.params.size(); ++i) {
    EXPECT_EQ(loaded.params[i], static_cast<double>(static_cast<float>(original.params[i])));
  }
  EXPECT_TRUE(loaded.params.same_shape_as(original.params));
}

TEST(Checkpoint_, NullTrainConfigRoundTrips) {
  testutil::TempDir dir("ckpt");
  const std::string path = dir.str("model.bin");
  Checkpoint ckpt = make_checkpoint();
  ckpt.train_config.reset();
  save_checkpoint(path, ckpt);
  const Checkpoint loaded = load_checkpoint(path);
  EXPECT_FALSE(loaded.train_config.has_value());
}

TEST(Checkpoint_, SaveLoadSaveIsByteIdentical) {
  testutil::TempDir dir("ckpt");
  const std::string first = dir.str("a.bin");
  const std::string second = dir.str("b.bin");
  save_checkpoint(first, make_checkpoint());
  const Checkpoint loaded = load_checkpoint(first);
  save_checkpoint(second, loaded);
  EXPECT_EQ(testutil::read_file(first), testutil::read_file(second));
}

TEST(Checkpoint_, EveryCorruptedByteIsDetected) {
  testutil::TempDir dir("ckpt");
  const std::string path = dir.str("model.bin");
  save_checkpoint(path, make_checkpoint());
  const std::string good = testutil::read_file(path);

  // Flipping any single byte must be rejected — by the integrity hash, or
  // for trailer bytes by the hash comparison itself.
  const std::string corrupt_path = dir.str("corrupt.bin");
  const size_t stride = std::max<size_t>(1, good.size() / 64);
  for (size_t pos = 0; pos < good.size(); pos += stride) {
    std::string bad = good;
    bad[pos] = static_cast<char>(bad[pos] ^ 0x5A);
    testutil::write_file(corrupt_path, bad);
    try {
      load_checkpoint(corrupt_path);
      FAIL() << "expected Error for corrupted byte at " << pos;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Checkpoint) << "byte " << pos;
    }
  }
}

TEST(Checkpoint_, TruncationDetected) {
  testutil::TempDir dir("ckpt");
  const std::string path = dir.str("model.bin");
  save_checkpoint(path, make_checkpoint());
  const std::string good = testutil::read_file(path);
  const std::string cut_path = dir.str("cut.bin");
  for (const size_t keep : {size_t{0}, size_t{3}, size_t{23}, good.size() / 2,
                            good.size() - 1}) {
    testutil::write_file(cut_path, good.substr(0, keep));
    try {
      load_checkpoint(cut_path);
      FAIL() << "expected Error at " << keep << " bytes";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Checkpoint) << keep;
    }
  }
}

TEST(Checkpoint_, WrongMagicRejected) {
  testutil::TempDir dir("ckpt");
  const std::string path = dir.str("model.bin");
  save_checkpoint(path, make_checkpoint());
  std::string bad = testutil::read_file(path);
  bad[0] = 'X';
  const std::string bad_path = dir.str("bad.bin");
  testutil::write_file(bad_path, bad);
  try {
    load_checkpoint(bad_path);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Checkpoint);
    EXPECT_NE(std::string(e.what()).find("not a checkpoint"), std::string::npos);
  }
}

TEST(Checkpoint_, UnsupportedVersionRejected) {
  testutil::TempDir dir("ckpt");
  const std::string path = dir.str("model.bin");
  save_checkpoint(path, make_checkpoint());
  std::string bad = testutil::read_file(path);
  bad[4] = 9;  // bump the format version
  // Re-stamp the trailer so only the version check can fire.
  const uint64_t h = emojipred::fnv1a(std::string_view(bad.data(), bad.size() - 8));
  for (int i = 0; i < 8; ++i) {
    bad[bad.size() - 8 + static_cast<size_t>(i)] = static_cast<char>((h >> (8 * i)) & 0xFF);
  }
  const std::string bad_path = dir.str("bad.bin");
  testutil::write_file(bad_path, bad);
  try {
    load_checkpoint(bad_path);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Checkpoint);
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
}

TEST(Checkpoint_, MissingFileThrowsIo) {
  try {
    load_checkpoint("/nonexistent/model.bin");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Checkpoint_, MultilabelHeadRoundTrips) {
  testutil::TempDir dir("ckpt");
  const std::string path = dir.str("ml.bin");
  Checkpoint ckpt;
  ckpt.model_config = tiny_config(HeadKind::MultiLabel);
  ckpt.params = Parameters::build(ckpt.model_config);
  ckpt.params.init(11);
  save_checkpoint(path, ckpt);
  const Checkpoint loaded = load_checkpoint(path);
  EXPECT_EQ(loaded.model_config.head_kind, HeadKind::MultiLabel);
  EXPECT_EQ(loaded.params.size(), ckpt.params.size());
}
