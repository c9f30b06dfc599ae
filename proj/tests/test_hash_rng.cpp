// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "emojipred/hash.hpp"
#include "emojipred/rng.hpp"

#include "test_util.hpp"

using emojipred::Fnv1a;
using emojipred::Rng;

// Published FNV-1a 64-bit reference vectors.
TEST(Fnv, MatchesReferenceVectors) {
  EXPECT_EQ(emojipred::fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(emojipred::fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(emojipred::fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(Fnv, StreamingEqualsOneShot) {
  Fnv1a h;
  h.update("foo");
  h.update("bar");
  EXPECT_EQ(h.value(), emojipred::fnv1a("foobar"));
}

TEST(Fnv, HexIsZeroPadded16) {
  Fnv1a h;
  const std::string hex = h.hex();
  EXPECT_EQ(hex.size(), 16u);
  EXPECT_EQ(hex, "cbf29ce484222325");
}

TEST(Fnv, FileHashMatchesBytesHash) {
  testutil::TempDir dir("fnv");
  const std::string payload = "some bytes\nwith a newline";
  testutil::write_file(dir.str("f.bin"), payload);
  EXPECT_EQ(emojipred::hash_file_hex(dir.str("f.bin")),
            emojipred::hash_bytes_hex(payload));
}

TEST(Rng, SameSeedAndStreamReproduce) {
  Rng a(42, "stream");
  Rng b(42, "stream");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentStreamsDiverge) {
  Rng a(42, "alpha");
  Rng b(42, "beta");
  size_t same = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.next_u64() == b.next_u64()) ++same;
  }
  EXPECT_EQ(same, 0u);
}

TEST(Rng, NextBelowStaysInRange) {
  Rng rng(7, "bounds");
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(rng.next_below(17), 17u);
  }
  EXPECT_EQ(rng.next_below(1), 0u);
}

TEST(Rng, NextBelowCoversAllResidues) {
  Rng rng(11, "cover");
  std::map<uint64_t, int> seen;
  for (int i = 0; i < 5000; ++i) ++seen[rng.next_below(5)];
  EXPECT_EQ(seen.size(), 5u);
  for (const auto& [value, count] : seen) {
    EXPECT_GT(count, 700) << "residue " << value << " badly underrepresented";
  }
}

TEST(Rng, NextRealInHalfOpenUnit) {
  Rng rng(3, "real");
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.next_real();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(Rng, UniformRespectsBounds) {
  Rng rng(5, "uniform");
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.next_uniform(-0.25, 0.25);
    EXPECT_GE(x, -0.25);
    EXPECT_LT(x, 0.25);
  }
}

TEST(Rng, ShuffleIsDeterministicPermutation) {
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  std::vector<int> w = v;
  Rng a(9, "shuffle");
  Rng b(9, "shuffle");
  a.shuffle(v);
  b.shuffle(w);
  EXPECT_EQ(v, w);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(50);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(sorted, expected);
  EXPECT_NE(v, expected);  // astronomically unlikely to be identity
}
