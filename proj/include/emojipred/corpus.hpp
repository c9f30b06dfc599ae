// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emojipred/error.hpp"

namespace emojipred {

// One raw input record as read from the corpus file.
struct RawRecord {
  std::string id;
  std::string text;

  bool operator==(const RawRecord& other) const = default;
};

// Result of reading a line-delimited corpus. Malformed lines are skipped,
// tallied, and reported with their line numbers (capped, to bound memory).
struct CorpusReadResult {
  std::vector<RawRecord> records;
  size_t malformed_count = 0;
  std::vector<size_t> malformed_lines;  // 1-based, first kMaxReportedLines only

  static constexpr size_t kMaxReportedLines = 20;
};

// Reads a corpus of line-delimited objects with string fields `id` and
// `text`. Blank lines are ignored; anything else unparsable is malformed.
inline CorpusReadResult read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open corpus file: " + path);

  CorpusReadResult result;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json row = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!row.is_object() || !row.contains("id") || !row.contains("text") ||
        !row["id"].is_string() || !row["text"].is_string()) {
      ++result.malformed_count;
      if (result.malformed_lines.size() < CorpusReadResult::kMaxReportedLines) {
        result.malformed_lines.push_back(line_no);
      }
      continue;
    }
    result.records.push_back(RawRecord{row["id"].get<std::string>(),
                                       row["text"].get<std::string>()});
  }
  return result;
}

}  // namespace emojipred
