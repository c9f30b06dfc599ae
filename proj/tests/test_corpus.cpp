// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#include "emojipred/corpus.hpp"

#include <gtest/gtest.h>

#include <string>

#include "emojipred/error.hpp"
#include "test_util.hpp"

using emojipred::CorpusReadResult;
using emojipred::Error;
using emojipred::ErrorKind;
using emojipred::RawRecord;
using emojipred::read_corpus;

TEST(Corpus, ReadsValidJsonl) {
  testutil::TempDir dir("corpus");
  const std::string path = dir.str("c.jsonl");
  testutil::write_file(path,
                       "{\"id\":\"1\",\"text\":\"hello\"}\n"
                       "{\"id\":\"2\",\"text\":\"world \\ud83d\\ude02\"}\n");
  const CorpusReadResult r = read_corpus(path);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0], (RawRecord{"1", "hello"}));
  EXPECT_EQ(r.records[1].id, "2");
  EXPECT_EQ(r.records[1].text, "world \xF0\x9F\x98\x82");
  EXPECT_EQ(r.malformed_count, 0u);
  EXPECT_TRUE(r.malformed_lines.empty());
}

TEST(Corpus, BlankLinesIgnored) {
  testutil::TempDir dir("corpus");
  const std::string path = dir.str("c.jsonl");
  testutil::write_file(path,
                       "\n"
                       "{\"id\":\"a\",\"text\":\"x\"}\n"
                       "   \t\r\n"
                       "\n"
                       "{\"id\":\"b\",\"text\":\"y\"}\n");
  const CorpusReadResult r = read_corpus(path);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.malformed_count, 0u);
}

TEST(Corpus, MalformedLinesTalliedWithOneBasedNumbers) {
  testutil::TempDir dir("corpus");
  const std::string path = dir.str("c.jsonl");
  testutil::write_file(path,
                       "{\"id\":\"a\",\"text\":\"ok\"}\n"
                       "this is not json\n"
                       "{\"id\":\"b\"}\n"
                       "{\"id\":7,\"text\":\"num id\"}\n"
                       "{\"id\":\"c\",\"text\":42}\n"
                       "[\"an\",\"array\"]\n"
                       "{\"id\":\"d\",\"text\":\"ok too\"}\n");
  const CorpusReadResult r = read_corpus(path);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].id, "a");
  EXPECT_EQ(r.records[1].id, "d");
  EXPECT_EQ(r.malformed_count, 5u);
  EXPECT_EQ(r.malformed_lines, (std::vector<size_t>{2, 3, 4, 5, 6}));
}

TEST(Corpus, ReportedLineNumbersCapAtTwenty) {
  testutil::TempDir dir("corpus");
  const std::string path = dir.str("c.jsonl");
  std::string content;
  for (int i = 0; i < 30; ++i) content += "garbage\n";
  content += "{\"id\":\"z\",\"text\":\"tail\"}\n";
  testutil::write_file(path, content);
  const CorpusReadResult r = read_corpus(path);
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.malformed_count, 30u);
  ASSERT_EQ(r.malformed_lines.size(), CorpusReadResult::kMaxReportedLines);
  EXPECT_EQ(r.malformed_lines.front(), 1u);
  EXPECT_EQ(r.malformed_lines.back(), 20u);
}

TEST(Corpus, MissingFileThrowsIo) {
  try {
    read_corpus("/nonexistent/path/to/corpus.jsonl");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Corpus, EmptyFileYieldsEmptyResult) {
  testutil::TempDir dir("corpus");
  const std::string path = dir.str("c.jsonl");
  testutil::write_file(path, "");
  const CorpusReadResult r = read_corpus(path);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.malformed_count, 0u);
}

TEST(Corpus, ExtraFieldsAreFine) {
  testutil::TempDir dir("corpus");
  const std::string path = dir.str("c.jsonl");
  testutil::write_file(path, "{\"id\":\"a\",\"text\":\"x\",\"lang\":\"en\"}\n");
  const CorpusReadResult r = read_corpus(path);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].text, "x");
}
