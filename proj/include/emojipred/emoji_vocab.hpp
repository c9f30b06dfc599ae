// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "emojipred/corpus.hpp"
#include "emojipred/emoji_data.hpp"
#include "emojipred/error.hpp"
#include "emojipred/hash.hpp"
#include "emojipred/segment.hpp"
#include "emojipred/utf8.hpp"

namespace emojipred {

// The ordered label set E: the K most frequent emojis of a corpus.
class EmojiVocabulary {
 public:
  struct Entry {
    std::u32string emoji;
    int32_t index = 0;
    uint64_t frequency = 0;
  };

  struct Metadata {
    size_t k = 0;
    std::string tie_break_rule = "lexicographic";
    std::string source_corpus_hash;
  };

  size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  const Metadata& metadata() const { return metadata_; }

  // Index of an emoji sequence, or -1 when out of vocabulary.
  int32_t index_of(const std::u32string& emoji) const {
    auto it = index_.find(emoji);
    return it == index_.end() ? -1 : it->second;
  }

  const std::u32string& emoji_at(size_t index) const {
    if (index >= entries_.size()) {
      throw Error(ErrorKind::Shape, "emoji index out of range: " + std::to_string(index));
    }
    return entries_[index].emoji;
  }

  std::string utf8_at(size_t index) const { return utf8::encode(emoji_at(index)); }

  std::string content_hash() const {
    Fnv1a h;
    for (const Entry& e : entries_) {
      h.update(utf8::encode(e.emoji));
      h.update("\t");
      h.update(std::to_string(e.index));
      h.update("\t");
      h.update(std::to_string(e.frequency));
      h.update("\n");
    }
    return h.hex();
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write emoji vocabulary: " + path);
    for (const Entry& e : entries_) {
      out << utf8::encode(e.emoji) << '\t' << e.index << '\t' << e.frequency << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "short write to emoji vocabulary: " + path);
  }

  static EmojiVocabulary load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open emoji vocabulary: " + path);
    EmojiVocabulary vocab;
    std::string line;
    size_t line_no = 0;
    uint64_t prev_freq = UINT64_MAX;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const size_t t1 = line.find('\t');
      const size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
      if (t2 == std::string::npos) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": expected <emoji>\\t<index>\\t<frequency>");
      }
      Entry e;
      e.emoji = decode_emoji(line.substr(0, t1), path, line_no);
      try {
        e.index = static_cast<int32_t>(std::stol(line.substr(t1 + 1, t2 - t1 - 1)));
        e.frequency = std::stoull(line.substr(t2 + 1));
      } catch (const std::exception&) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": bad numeric field");
      }
      if (e.index != static_cast<int32_t>(vocab.entries_.size())) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": indices must be dense and in order");
      }
      if (e.frequency > prev_freq) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": frequencies must be non-increasing");
      }
      prev_freq = e.frequency;
      if (!vocab.index_.emplace(e.emoji, e.index).second) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": duplicate emoji row");
      }
      vocab.entries_.push_back(std::move(e));
    }
    if (vocab.entries_.empty()) {
      throw Error(ErrorKind::Format, path + ": empty emoji vocabulary");
    }
    vocab.metadata_.k = vocab.entries_.size();
    return vocab;
  }

 private:
  friend EmojiVocabulary build_vocab_topk(
      const std::unordered_map<std::u32string, uint64_t>&, size_t, const std::string&);

  static std::u32string decode_emoji(const std::string& bytes, const std::string& path,
                                     size_t line_no) {
    try {
      std::u32string cps;
      size_t pos = 0;
      while (pos < bytes.size()) {
        const utf8::Decoded d = utf8::decode(bytes, pos);
        cps.push_back(d.cp);
        pos += d.length;
      }
      if (cps.empty()) throw Error(ErrorKind::Format, "empty emoji");
      return cps;
    } catch (const Error&) {
      throw Error(ErrorKind::Format,
                  path + ":" + std::to_string(line_no) + ": invalid emoji field");
    }
  }

  std::vector<Entry> entries_;
  std::unordered_map<std::u32string, int32_t> index_;
  Metadata metadata_;
};

// Counts every extracted emoji occurrence (repeats included) across the
// corpus. Sequences are canonicalized to their fully-qualified form when
// `canonicalize` is set, so "❤" and "❤️" pool into one count.
inline std::unordered_map<std::u32string, uint64_t> count_emoji_frequencies(
    const std::vector<RawRecord>& records, const EmojiDataTable& table,
    bool canonicalize = true) {
  std::unordered_map<std::u32string, uint64_t> counts;
  for (const RawRecord& record : records) {
    if (!utf8::is_valid(record.text)) continue;  // unreadable: reader tallies these
    for (const EmojiToken& token : segment(record.text, table)) {
      ++counts[canonicalize ? table.canonical_form(token.codepoints) : token.codepoints];
    }
  }
  return counts;
}

// Picks the K most frequent emojis, ordered by descending frequency with
// lexicographic tie-break on the codepoint sequence.
inline EmojiVocabulary build_vocab_topk(
    const std::unordered_map<std::u32string, uint64_t>& freqs, size_t k,
    const std::string& source_corpus_hash = "") {
  if (k < 1) throw Error(ErrorKind::Config, "vocabulary size K must be >= 1");
  if (k > freqs.size()) {
    throw Error(ErrorKind::Config,
                "requested K=" + std::to_string(k) + " emojis but the corpus has only " +
                    std::to_string(freqs.size()) + " distinct emojis");
  }
  std::vector<std::pair<std::u32string, uint64_t>> sorted(freqs.begin(), freqs.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  EmojiVocabulary vocab;
  vocab.metadata_ = EmojiVocabulary::Metadata{k, "lexicographic", source_corpus_hash};
  for (size_t i = 0; i < k; ++i) {
    vocab.index_.emplace(sorted[i].first, static_cast<int32_t>(i));
    vocab.entries_.push_back(EmojiVocabulary::Entry{
        std::move(sorted[i].first), static_cast<int32_t>(i), sorted[i].second});
  }
  return vocab;
}

}  // namespace emojipred
