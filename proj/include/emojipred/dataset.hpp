// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "emojipred/corpus.hpp"
#include "emojipred/emoji_data.hpp"
#include "emojipred/emoji_vocab.hpp"
#include "emojipred/error.hpp"
#include "emojipred/normalize.hpp"
#include "emojipred/rng.hpp"
#include "emojipred/segment.hpp"
#include "emojipred/version.hpp"
#include "emojipred/word_vocab.hpp"

namespace emojipred {

enum class DatasetKind { MultiClass, MultiLabel };

inline const char* to_string(DatasetKind kind) {
  return kind == DatasetKind::MultiClass ? "multiclass" : "multilabel";
}

inline DatasetKind dataset_kind_from_string(const std::string& s) {
  if (s == "multiclass") return DatasetKind::MultiClass;
  if (s == "multilabel") return DatasetKind::MultiLabel;
  throw Error(ErrorKind::Config, "unknown dataset kind: " + s);
}

// One training example. Multi-class examples carry `label`; multi-label
// examples carry `label_bits` (one byte per vocabulary emoji, 0/1).
// `text` is the emoji-stripped normalized content; `doc` is its tokenized
// form, filled in once a word vocabulary exists.
struct LabeledExample {
  Document doc;
  std::string text;
  int32_t label = -1;
  std::vector<uint8_t> label_bits;
  std::string origin_id;

  bool operator==(const LabeledExample& other) const = default;
};

// Everything the labeling functions need beyond the record itself. `words`
// may be null while the word vocabulary is still being built; tokenization
// then happens later via tokenize_examples.
struct LabelingContext {
  const EmojiDataTable* table = nullptr;
  const EmojiVocabulary* vocab = nullptr;
  NormalizationConfig prep;
  const WordVocabulary* words = nullptr;
  size_t max_seq_len = 128;
  bool canonicalize = true;
};

namespace detail {

// Distinct in-vocabulary emoji indices extracted from `text`, ascending.
inline std::set<int32_t> distinct_label_indices(const std::string& text,
                                                const LabelingContext& ctx) {
  std::set<int32_t> indices;
  for (const EmojiToken& token : segment(text, *ctx.table)) {
    const std::u32string key =
        ctx.canonicalize ? ctx.table->canonical_form(token.codepoints) : token.codepoints;
    const int32_t index = ctx.vocab->index_of(key);
    if (index >= 0) indices.insert(index);
  }
  return indices;
}

inline LabeledExample base_example(const RawRecord& record, const LabelingContext& ctx) {
  LabeledExample example;
  example.origin_id = record.id;
  example.text = normalize(strip_emojis(record.text, *ctx.table), ctx.prep);
  if (ctx.words != nullptr) {
    example.doc = tokenize(example.text, *ctx.words, ctx.max_seq_len, record.id);
  }
  return example;
}

}  // namespace detail

// Multi-class labeling: one example per distinct in-vocabulary emoji in the
// record, all sharing the same stripped+normalized document. Emoji-free (or
// all-out-of-vocabulary) records yield nothing.
inline std::vector<LabeledExample> label_multiclass(const RawRecord& record,
                                                    const LabelingContext& ctx) {
  const std::set<int32_t> indices = detail::distinct_label_indices(record.text, ctx);
  std::vector<LabeledExample> out;
  if (indices.empty()) return out;
  const LabeledExample base = detail::base_example(record, ctx);
  out.reserve(indices.size());
  for (int32_t index : indices) {
    out.push_back(base);
    out.back().label = index;
  }
  return out;
}

// Multi-label labeling: one example whose bitset marks every distinct
// in-vocabulary emoji; nothing if the bitset would be empty.
inline std::optional<LabeledExample> label_multilabel(const RawRecord& record,
                                                      const LabelingContext& ctx) {
  const std::set<int32_t> indices = detail::distinct_label_indices(record.text, ctx);
  if (indices.empty()) return std::nullopt;
  LabeledExample example = detail::base_example(record, ctx);
  example.label_bits.assign(ctx.vocab->size(), 0);
  for (int32_t index : indices) example.label_bits[static_cast<size_t>(index)] = 1;
  return example;
}

// Class-balancing parameters: classes above `cap` are downsampled without
// replacement, classes below `floor` are upsampled by duplication.
struct BalanceConfig {
  uint64_t cap = 0;
  uint64_t floor = 0;
  uint64_t seed = 0;
};

// Balances a multi-class example list per the config. Deterministic for a
// fixed seed: per-class sampling and the final shuffle draw from named
// substreams of config.seed.
inline std::vector<LabeledExample> balance(const std::vector<LabeledExample>& examples,
                                           const BalanceConfig& config) {
  if (config.floor > config.cap) {
    throw Error(ErrorKind::Config,
                "balance floor (" + std::to_string(config.floor) + ") exceeds cap (" +
                    std::to_string(config.cap) + ")");
  }
  std::map<int32_t, std::vector<size_t>> by_class;
  for (size_t i = 0; i < examples.size(); ++i) {
    if (!examples[i].label_bits.empty() || examples[i].label < 0) {
      throw Error(ErrorKind::Config, "balance applies to multi-class examples only");
    }
    by_class[examples[i].label].push_back(i);
  }
  std::vector<size_t> kept;
  for (auto& [label, indices] : by_class) {
    const uint64_t n = indices.size();
    if (n > config.cap) {
      Rng rng(config.seed, "balance.down." + std::to_string(label));
      rng.shuffle(indices);
      indices.resize(config.cap);
    } else if (n < config.floor) {
      Rng rng(config.seed, "balance.up." + std::to_string(label));
      for (uint64_t i = n; i < config.floor; ++i) {
        indices.push_back(indices[rng.next_below(n)]);
      }
    }
    kept.insert(kept.end(), indices.begin(), indices.end());
  }
  Rng shuffle_rng(config.seed, "balance.shuffle");
  shuffle_rng.shuffle(kept);
  std::vector<LabeledExample> out;
  out.reserve(kept.size());
  for (size_t i : kept) out.push_back(examples[i]);
  return out;
}

struct SplitRatios {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

struct SplitResult {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> dev;
  std::vector<LabeledExample> test;
};

// Seeded shuffle + contiguous cut, grouped by origin_id so examples
// duplicated from one record never straddle split boundaries.
inline SplitResult split(const std::vector<LabeledExample>& examples,
                         const SplitRatios& ratios, uint64_t seed) {
  if (ratios.train <= 0 || ratios.dev <= 0 || ratios.test <= 0 ||
      std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorKind::Config, "split ratios must be positive and sum to 1");
  }
  // Group indices by origin in first-appearance order.
  std::vector<std::vector<size_t>> groups;
  std::unordered_map<std::string, size_t> group_of;
  for (size_t i = 0; i < examples.size(); ++i) {
    auto [it, inserted] = group_of.emplace(examples[i].origin_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  Rng rng(seed, "split.shuffle");
  rng.shuffle(groups);

  const double n = static_cast<double>(examples.size());
  const size_t train_end = static_cast<size_t>(std::llround(ratios.train * n));
  const size_t dev_end = static_cast<size_t>(std::llround((ratios.train + ratios.dev) * n));

  SplitResult result;
  size_t start = 0;  // index of the group's first example in shuffled order
  for (const std::vector<size_t>& group : groups) {
    std::vector<LabeledExample>* dest = &result.test;
    if (start < train_end) dest = &result.train;
    else if (start < dev_end) dest = &result.dev;
    for (size_t i : group) dest->push_back(examples[i]);
    start += group.size();
  }
  return result;
}

// Aggregate shape of a dataset: per-class counts and label density.
struct DatasetStats {
  size_t example_count = 0;
  std::vector<uint64_t> class_histogram;
  std::optional<double> mean_labels_per_example;
  uint64_t max_class_count = 0;
  uint64_t min_class_count = 0;
};

inline DatasetStats stats(const std::vector<LabeledExample>& examples,
                          DatasetKind kind, size_t label_count) {
  DatasetStats report;
  report.example_count = examples.size();
  report.class_histogram.assign(label_count, 0);
  uint64_t total_labels = 0;
  for (const LabeledExample& example : examples) {
    if (kind == DatasetKind::MultiClass) {
      if (example.label < 0 || static_cast<size_t>(example.label) >= label_count) {
        throw Error(ErrorKind::Shape, "example label out of range");
      }
      ++report.class_histogram[static_cast<size_t>(example.label)];
      ++total_labels;
    } else {
      if (example.label_bits.size() != label_count) {
        throw Error(ErrorKind::Shape, "example bitset width does not match label count");
      }
      for (size_t e = 0; e < label_count; ++e) {
        if (example.label_bits[e]) {
          ++report.class_histogram[e];
          ++total_labels;
        }
      }
    }
  }
  if (!examples.empty()) {
    report.mean_labels_per_example =
        static_cast<double>(total_labels) / static_cast<double>(examples.size());
  }
  if (!report.class_histogram.empty()) {
    report.max_class_count =
        *std::max_element(report.class_histogram.begin(), report.class_histogram.end());
    report.min_class_count =
        *std::min_element(report.class_histogram.begin(), report.class_histogram.end());
  }
  return report;
}

inline nlohmann::json stats_to_json(const DatasetStats& s) {
  nlohmann::json j;
  j["example_count"] = s.example_count;
  j["class_histogram"] = s.class_histogram;
  if (s.mean_labels_per_example.has_value()) {
    j["mean_labels_per_example"] = *s.mean_labels_per_example;
  } else {
    j["mean_labels_per_example"] = nullptr;
  }
  j["max_class_count"] = s.max_class_count;
  j["min_class_count"] = s.min_class_count;
  return j;
}

// ---------------------------------------------------------------------------
// Dataset files: one JSON header line, then one JSON object per example with
// fields id / labels (emoji strings) / text. Loading cross-checks the header
// against the vocabulary in hand, so stale or mismatched files are refused.

struct DatasetHeader {
  DatasetKind kind = DatasetKind::MultiClass;
  size_t label_count = 0;
  std::string emoji_vocab_hash;
  uint64_t seed = 0;
  std::string split_name;
  NormalizationConfig normalization;
  std::optional<BalanceConfig> balance;
  std::string toolkit_version = kToolkitVersion;
  std::string unicode_version;
};

inline nlohmann::json normalization_to_json(const NormalizationConfig& c) {
  return nlohmann::json{
      {"replace_digit_runs", c.replace_digit_runs},
      {"lowercase", c.lowercase},
      {"url_policy", c.url_policy == UrlPolicy::Keep ? "keep" : "replace_token"},
  };
}

inline NormalizationConfig normalization_from_json(const nlohmann::json& j) {
  NormalizationConfig c;
  c.replace_digit_runs = j.at("replace_digit_runs").get<bool>();
  c.lowercase = j.at("lowercase").get<bool>();
  const std::string url = j.at("url_policy").get<std::string>();
  if (url == "keep") c.url_policy = UrlPolicy::Keep;
  else if (url == "replace_token") c.url_policy = UrlPolicy::ReplaceToken;
  else throw Error(ErrorKind::Format, "unknown url_policy: " + url);
  return c;
}

inline nlohmann::json header_to_json(const DatasetHeader& h) {
  nlohmann::json j;
  j["kind"] = to_string(h.kind);
  j["label_count"] = h.label_count;
  j["emoji_vocab_hash"] = h.emoji_vocab_hash;
  j["seed"] = h.seed;
  j["split"] = h.split_name;
  j["normalization"] = normalization_to_json(h.normalization);
  if (h.balance.has_value()) {
    j["balance"] = {{"cap", h.balance->cap}, {"floor", h.balance->floor},
                    {"seed", h.balance->seed}};
  } else {
    j["balance"] = nullptr;
  }
  j["toolkit_version"] = h.toolkit_version;
  j["unicode_version"] = h.unicode_version;
  return j;
}

inline DatasetHeader header_from_json(const nlohmann::json& j) {
  DatasetHeader h;
  h.kind = dataset_kind_from_string(j.at("kind").get<std::string>());
  h.label_count = j.at("label_count").get<size_t>();
  h.emoji_vocab_hash = j.at("emoji_vocab_hash").get<std::string>();
  h.seed = j.at("seed").get<uint64_t>();
  h.split_name = j.at("split").get<std::string>();
  h.normalization = normalization_from_json(j.at("normalization"));
  if (!j.at("balance").is_null()) {
    const nlohmann::json& b = j.at("balance");
    h.balance = BalanceConfig{b.at("cap").get<uint64_t>(), b.at("floor").get<uint64_t>(),
                              b.at("seed").get<uint64_t>()};
  }
  h.toolkit_version = j.at("toolkit_version").get<std::string>();
  h.unicode_version = j.at("unicode_version").get<std::string>();
  return h;
}

inline void save_dataset(const std::string& path, const DatasetHeader& header,
                         const std::vector<LabeledExample>& examples,
                         const EmojiVocabulary& vocab) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write dataset file: " + path);
  out << header_to_json(header).dump() << '\n';
  for (const LabeledExample& example : examples) {
    nlohmann::json row;
    row["id"] = example.origin_id;
    std::vector<std::string> labels;
    if (header.kind == DatasetKind::MultiClass) {
      labels.push_back(vocab.utf8_at(static_cast<size_t>(example.label)));
    } else {
      for (size_t e = 0; e < example.label_bits.size(); ++e) {
        if (example.label_bits[e]) labels.push_back(vocab.utf8_at(e));
      }
    }
    row["labels"] = labels;
    row["text"] = example.text;
    out << row.dump() << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "short write to dataset file: " + path);
}

// Reads just the header line of a dataset file.
inline DatasetHeader load_dataset_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::Format, path + ": missing dataset header line");
  }
  nlohmann::json hj = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (hj.is_discarded()) {
    throw Error(ErrorKind::Format, path + ": dataset header is not valid JSON");
  }
  try {
    return header_from_json(hj);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, path + ": bad dataset header: " + e.what());
  }
}

inline std::pair<DatasetHeader, std::vector<LabeledExample>> load_dataset(
    const std::string& path, const EmojiVocabulary& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::Format, path + ": missing dataset header line");
  }
  nlohmann::json hj = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (hj.is_discarded()) {
    throw Error(ErrorKind::Format, path + ": dataset header is not valid JSON");
  }
  DatasetHeader header;
  try {
    header = header_from_json(hj);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, path + ": bad dataset header: " + e.what());
  }
  if (header.emoji_vocab_hash != vocab.content_hash()) {
    throw Error(ErrorKind::Format,
                path + ": emoji vocabulary hash mismatch (dataset was built with a "
                       "different vocabulary)");
  }
  if (header.label_count != vocab.size()) {
    throw Error(ErrorKind::Format, path + ": label count does not match vocabulary size");
  }

  std::vector<LabeledExample> examples;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (row.is_discarded() || !row.is_object() || !row.contains("id") ||
        !row.contains("labels") || !row.contains("text")) {
      throw Error(ErrorKind::Format,
                  path + ":" + std::to_string(line_no) + ": malformed dataset row");
    }
    LabeledExample example;
    example.origin_id = row["id"].get<std::string>();
    example.text = row["text"].get<std::string>();
    std::vector<int32_t> indices;
    for (const auto& label : row["labels"]) {
      const std::string utf8_label = label.get<std::string>();
      std::u32string cps;
      size_t pos = 0;
      while (pos < utf8_label.size()) {
        const utf8::Decoded d = utf8::decode(utf8_label, pos);
        cps.push_back(d.cp);
        pos += d.length;
      }
      const int32_t index = vocab.index_of(cps);
      if (index < 0) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": label not in vocabulary");
      }
      indices.push_back(index);
    }
    if (indices.empty()) {
      throw Error(ErrorKind::Format,
                  path + ":" + std::to_string(line_no) + ": example with no labels");
    }
    if (header.kind == DatasetKind::MultiClass) {
      if (indices.size() != 1) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) +
                        ": multi-class rows must have exactly one label");
      }
      example.label = indices[0];
    } else {
      example.label_bits.assign(vocab.size(), 0);
      for (int32_t index : indices) example.label_bits[static_cast<size_t>(index)] = 1;
    }
    examples.push_back(std::move(example));
  }
  return {header, std::move(examples)};
}

// Fills in `doc` for every example from its stored text.
inline void tokenize_examples(std::vector<LabeledExample>& examples,
                              const WordVocabulary& words, size_t max_seq_len) {
  for (LabeledExample& example : examples) {
    example.doc = tokenize(example.text, words, max_seq_len, example.origin_id);
  }
}

}  // namespace emojipred
