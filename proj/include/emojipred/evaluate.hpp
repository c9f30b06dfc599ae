// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "emojipred/dataset.hpp"
#include "emojipred/error.hpp"
#include "emojipred/metrics.hpp"
#include "emojipred/model.hpp"

namespace emojipred {

// Runs the model over every example and aggregates the metrics matching its
// head kind.
inline MetricsReport evaluate(const std::vector<LabeledExample>& examples,
                              const Parameters& params, const ModelConfig& config) {
  if (examples.empty()) {
    throw Error(ErrorKind::Config, "cannot evaluate an empty dataset");
  }
  MetricsReport report;
  report.support.assign(config.label_count, 0);

  if (config.head_kind == HeadKind::MultiClass) {
    std::vector<int32_t> predictions, gold;
    std::vector<std::vector<int32_t>> rankings;
    const size_t k = std::min<size_t>(5, config.label_count);
    for (const LabeledExample& example : examples) {
      const Vec probs = predict_multiclass(example.doc, params, config);
      const std::vector<int32_t> ranked = rank_topk(probs, k);
      predictions.push_back(ranked[0]);
      rankings.push_back(ranked);
      gold.push_back(example.label);
      ++report.support[static_cast<size_t>(example.label)];
    }
    report.accuracy = accuracy(predictions, gold);
    report.top5_accuracy = topk_accuracy(rankings, gold);
    report.f1_macro = f1_macro(predictions, gold, config.label_count);
    return report;
  }

  std::vector<std::vector<uint8_t>> predicted_sets, label_sets;
  for (const LabeledExample& example : examples) {
    const Vec z = logits(example.doc, params, config);
    std::vector<uint8_t> bits(config.label_count, 0);
    for (size_t e = 0; e < config.label_count; ++e) {
      bits[e] = presence_score(z, e) > 0.5 ? 1 : 0;
    }
    predicted_sets.push_back(std::move(bits));
    label_sets.push_back(example.label_bits);
    for (size_t e = 0; e < config.label_count; ++e) {
      if (example.label_bits[e]) ++report.support[e];
    }
  }
  report.per_emoji_accuracy =
      per_emoji_accuracy(predicted_sets, label_sets, config.label_count);
  double sum = 0.0;
  for (double v : report.per_emoji_accuracy) sum += v;
  report.mean_per_emoji_accuracy = sum / static_cast<double>(config.label_count);
  return report;
}

}  // namespace emojipred
