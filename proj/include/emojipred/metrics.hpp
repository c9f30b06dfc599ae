// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emojipred/error.hpp"

namespace emojipred {

// Fraction of positions where prediction == label.
inline double accuracy(const std::vector<int32_t>& predictions,
                       const std::vector<int32_t>& labels) {
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw Error(ErrorKind::Shape, "accuracy needs equal-length nonempty inputs");
  }
  size_t hits = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

// Fraction of positions whose label appears anywhere in the top-k ranking.
inline double topk_accuracy(const std::vector<std::vector<int32_t>>& rankings,
                            const std::vector<int32_t>& labels) {
  if (rankings.empty() || rankings.size() != labels.size()) {
    throw Error(ErrorKind::Shape, "top-k accuracy needs equal-length nonempty inputs");
  }
  size_t hits = 0;
  for (size_t i = 0; i < rankings.size(); ++i) {
    const std::vector<int32_t>& ranking = rankings[i];
    if (std::set<int32_t>(ranking.begin(), ranking.end()).size() != ranking.size()) {
      throw Error(ErrorKind::Shape, "ranking contains duplicate entries");
    }
    if (std::find(ranking.begin(), ranking.end(), labels[i]) != ranking.end()) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

// Unweighted mean of per-class F1 over ALL class_count classes; a class with
// no predictions and no labels contributes 0.
inline double f1_macro(const std::vector<int32_t>& predictions,
                       const std::vector<int32_t>& labels, size_t class_count) {
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw Error(ErrorKind::Shape, "f1_macro needs equal-length nonempty inputs");
  }
  std::vector<uint64_t> tp(class_count, 0), fp(class_count, 0), fn(class_count, 0);
  for (size_t i = 0; i < predictions.size(); ++i) {
    const int32_t p = predictions[i], l = labels[i];
    if (p < 0 || static_cast<size_t>(p) >= class_count || l < 0 ||
        static_cast<size_t>(l) >= class_count) {
      throw Error(ErrorKind::Shape, "class index out of range");
    }
    if (p == l) {
      ++tp[static_cast<size_t>(p)];
    } else {
      ++fp[static_cast<size_t>(p)];
      ++fn[static_cast<size_t>(l)];
    }
  }
  double sum = 0.0;
  for (size_t c = 0; c < class_count; ++c) {
    const double denom = static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
    if (denom > 0) sum += 2.0 * static_cast<double>(tp[c]) / denom;
  }
  return sum / static_cast<double>(class_count);
}

// Per-emoji binary-decision accuracy over ALL examples: for each emoji e,
// the fraction of examples where (e predicted) == (e labeled).
inline std::vector<double> per_emoji_accuracy(
    const std::vector<std::vector<uint8_t>>& predicted_sets,
    const std::vector<std::vector<uint8_t>>& label_sets, size_t label_count) {
  if (predicted_sets.empty() || predicted_sets.size() != label_sets.size()) {
    throw Error(ErrorKind::Shape, "per-emoji accuracy needs equal-length nonempty inputs");
  }
  std::vector<uint64_t> correct(label_count, 0);
  for (size_t i = 0; i < predicted_sets.size(); ++i) {
    if (predicted_sets[i].size() != label_count || label_sets[i].size() != label_count) {
      throw Error(ErrorKind::Shape, "bitset width does not match label count");
    }
    for (size_t e = 0; e < label_count; ++e) {
      if ((predicted_sets[i][e] != 0) == (label_sets[i][e] != 0)) ++correct[e];
    }
  }
  std::vector<double> out(label_count);
  for (size_t e = 0; e < label_count; ++e) {
    out[e] = static_cast<double>(correct[e]) / static_cast<double>(predicted_sets.size());
  }
  return out;
}

// The full evaluation bundle. Multi-class runs fill accuracy/top-5/F1;
// multi-label runs fill the per-emoji vector and its mean; `support` counts
// gold labels per class either way.
struct MetricsReport {
  std::optional<double> accuracy;
  std::optional<double> top5_accuracy;
  std::optional<double> f1_macro;
  std::vector<double> per_emoji_accuracy;  // empty for multi-class
  std::optional<double> mean_per_emoji_accuracy;
  std::vector<uint64_t> support;
};

inline nlohmann::json metrics_to_json(const MetricsReport& r) {
  nlohmann::json j;
  auto put = [&j](const char* key, const std::optional<double>& v) {
    j[key] = v.has_value() ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  put("accuracy", r.accuracy);
  put("top5_accuracy", r.top5_accuracy);
  put("f1_macro", r.f1_macro);
  j["per_emoji_accuracy"] = r.per_emoji_accuracy;
  put("mean_per_emoji_accuracy", r.mean_per_emoji_accuracy);
  j["support"] = r.support;
  return j;
}

// Human-readable report with 2-decimal percent formatting.
inline std::string metrics_to_text(const MetricsReport& r) {
  std::string out;
  char buf[64];
  auto line = [&](const char* name, double value) {
    std::snprintf(buf, sizeof(buf), "%-26s %6.2f%%\n", name, value * 100.0);
    out += buf;
  };
  if (r.accuracy.has_value()) line("ACC", *r.accuracy);
  if (r.top5_accuracy.has_value()) line("ACC@5", *r.top5_accuracy);
  if (r.f1_macro.has_value()) line("F-1 (macro)", *r.f1_macro);
  if (r.mean_per_emoji_accuracy.has_value()) {
    line("mean per-emoji ACC", *r.mean_per_emoji_accuracy);
  }
  return out;
}

}  // namespace emojipred
