// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emojipred/error.hpp"
#include "emojipred/hash.hpp"

namespace emojipred {

// A tokenized input text: [CLS] followed by word ids, already truncated to
// the maximum sequence length. Never padded — batching pads if it must.
struct Document {
  std::vector<int32_t> tokens;
  std::string source_id;

  size_t length() const { return tokens.size(); }
  bool operator==(const Document& other) const = default;
};

// Corpus-derived word-token vocabulary with dense contiguous ids. Ids 0..2
// are reserved; real tokens follow ordered by descending corpus frequency,
// ties broken lexicographically.
class WordVocabulary {
 public:
  static constexpr int32_t kPadId = 0;
  static constexpr int32_t kUnkId = 1;
  static constexpr int32_t kClsId = 2;
  static constexpr size_t kReservedCount = 3;

  struct Entry {
    std::string token;
    int32_t id = 0;
    uint64_t frequency = 0;
  };

  WordVocabulary() {
    add_entry("<pad>", 0);
    add_entry("<unk>", 0);
    add_entry("<cls>", 0);
  }

  int32_t id_of(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    return it == ids_.end() ? kUnkId : it->second;
  }

  bool contains(std::string_view token) const {
    return ids_.find(std::string(token)) != ids_.end();
  }

  size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  uint64_t min_frequency() const { return min_frequency_; }

  // Stable fingerprint over the full serialized table, used to bind
  // checkpoints to the vocabulary they were trained with.
  std::string content_hash() const {
    Fnv1a h;
    for (const Entry& e : entries_) {
      h.update(e.token);
      h.update("\t");
      h.update(std::to_string(e.id));
      h.update("\t");
      h.update(std::to_string(e.frequency));
      h.update("\n");
    }
    return h.hex();
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write vocabulary file: " + path);
    for (const Entry& e : entries_) {
      out << e.token << '\t' << e.id << '\t' << e.frequency << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "short write to vocabulary file: " + path);
  }

  static WordVocabulary load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open vocabulary file: " + path);
    WordVocabulary vocab;
    vocab.entries_.clear();
    vocab.ids_.clear();
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const size_t t1 = line.find('\t');
      const size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
      if (t2 == std::string::npos) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": expected <token>\\t<id>\\t<frequency>");
      }
      Entry e;
      e.token = line.substr(0, t1);
      try {
        e.id = static_cast<int32_t>(std::stol(line.substr(t1 + 1, t2 - t1 - 1)));
        e.frequency = std::stoull(line.substr(t2 + 1));
      } catch (const std::exception&) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": bad numeric field");
      }
      if (e.id != static_cast<int32_t>(vocab.entries_.size())) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": ids must be dense and in order");
      }
      if (!vocab.ids_.emplace(e.token, e.id).second) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": duplicate token " + e.token);
      }
      vocab.entries_.push_back(std::move(e));
    }
    if (vocab.entries_.size() < kReservedCount ||
        vocab.entries_[0].token != "<pad>" || vocab.entries_[1].token != "<unk>" ||
        vocab.entries_[2].token != "<cls>") {
      throw Error(ErrorKind::Format, path + ": missing reserved vocabulary rows");
    }
    return vocab;
  }

 private:
  template <typename It>
  friend WordVocabulary build_word_vocab(It, It, uint64_t);

  void add_entry(std::string token, uint64_t frequency) {
    const int32_t id = static_cast<int32_t>(entries_.size());
    ids_.emplace(token, id);
    entries_.push_back(Entry{std::move(token), id, frequency});
  }

  std::vector<Entry> entries_;
  std::unordered_map<std::string, int32_t> ids_;
  uint64_t min_frequency_ = 1;
};

// Builds the vocabulary from normalized texts: every whitespace token with
// frequency >= min_frequency makes the cut. Deterministic ordering.
template <typename It>
WordVocabulary build_word_vocab(It first, It last, uint64_t min_frequency) {
  if (min_frequency < 1) {
    throw Error(ErrorKind::Config, "min_frequency must be >= 1");
  }
  std::unordered_map<std::string, uint64_t> counts;
  for (It it = first; it != last; ++it) {
    std::istringstream words(*it);
    std::string word;
    while (words >> word) ++counts[word];
  }
  std::vector<std::pair<std::string, uint64_t>> kept;
  kept.reserve(counts.size());
  for (auto& [token, count] : counts) {
    if (count >= min_frequency) kept.emplace_back(token, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  WordVocabulary vocab;
  vocab.min_frequency_ = min_frequency;
  for (auto& [token, count] : kept) vocab.add_entry(std::move(token), count);
  return vocab;
}

inline WordVocabulary build_word_vocab(const std::vector<std::string>& corpus,
                                       uint64_t min_frequency) {
  return build_word_vocab(corpus.begin(), corpus.end(), min_frequency);
}

// [CLS] + word ids (UNK for out-of-vocabulary), truncated to max_seq_len
// tokens total.
inline Document tokenize(std::string_view text, const WordVocabulary& vocab,
                         size_t max_seq_len, std::string source_id = "") {
  if (max_seq_len < 1) {
    throw Error(ErrorKind::Config, "max_seq_len must be >= 1");
  }
  Document doc;
  doc.source_id = std::move(source_id);
  doc.tokens.push_back(WordVocabulary::kClsId);
  std::istringstream words{std::string(text)};
  std::string word;
  while (doc.tokens.size() < max_seq_len && words >> word) {
    doc.tokens.push_back(vocab.id_of(word));
  }
  return doc;
}

}  // namespace emojipred
