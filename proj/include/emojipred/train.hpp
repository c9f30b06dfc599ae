// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emojipred/backprop.hpp"
#include "emojipred/dataset.hpp"
#include "emojipred/error.hpp"
#include "emojipred/model.hpp"
#include "emojipred/rng.hpp"

namespace emojipred {

enum class Optimizer { SGD, Adam };

inline const char* to_string(Optimizer o) { return o == Optimizer::SGD ? "sgd" : "adam"; }

inline Optimizer optimizer_from_string(const std::string& s) {
  if (s == "sgd") return Optimizer::SGD;
  if (s == "adam") return Optimizer::Adam;
  throw Error(ErrorKind::Config, "unknown optimizer: " + s);
}

struct TrainConfig {
  double learning_rate = 0.0001;
  size_t epochs = 5;
  size_t batch_size = 64;
  uint64_t seed = 0;
  Optimizer optimizer = Optimizer::Adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // Restricts updates to the head tensors; the encoder stays frozen. With a
  // multi-class head this makes the objective convex in the trained weights.
  bool head_only = false;

  void validate() const {
    if (learning_rate < 0) throw Error(ErrorKind::Config, "learning_rate must be >= 0");
    if (batch_size < 1) throw Error(ErrorKind::Config, "batch_size must be >= 1");
  }
};

inline nlohmann::json train_config_to_json(const TrainConfig& c) {
  return nlohmann::json{
      {"learning_rate", c.learning_rate}, {"epochs", c.epochs},
      {"batch_size", c.batch_size},       {"seed", c.seed},
      {"optimizer", to_string(c.optimizer)},
      {"adam_beta1", c.adam_beta1},       {"adam_beta2", c.adam_beta2},
      {"adam_eps", c.adam_eps},           {"head_only", c.head_only},
  };
}

inline TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<size_t>();
  c.batch_size = j.at("batch_size").get<size_t>();
  c.seed = j.at("seed").get<uint64_t>();
  c.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
  if (j.contains("adam_beta1")) c.adam_beta1 = j.at("adam_beta1").get<double>();
  if (j.contains("adam_beta2")) c.adam_beta2 = j.at("adam_beta2").get<double>();
  if (j.contains("adam_eps")) c.adam_eps = j.at("adam_eps").get<double>();
  if (j.contains("head_only")) c.head_only = j.at("head_only").get<bool>();
  return c;
}

struct EpochStats {
  size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double dev_loss = 0.0;
  double dev_accuracy = 0.0;
};

struct TrainResult {
  Parameters params;
  std::vector<EpochStats> history;
};

// Applies one optimizer step in place. Adam keeps first/second moments in
// two parameter-shaped bundles; `step` counts updates for bias correction.
class OptimizerState {
 public:
  OptimizerState(const ModelConfig& model_config, const TrainConfig& train_config)
      : config_(train_config),
        m_(Parameters::build(model_config)),
        v_(Parameters::build(model_config)) {}

  void apply(Parameters& params, const Parameters& grads) {
    ++step_;
    const double lr = config_.learning_rate;
    for (const Parameters::TensorInfo& info : params.tensors()) {
      if (config_.head_only && info.name.rfind("head.", 0) != 0) continue;
      for (size_t i = info.offset; i < info.offset + info.size; ++i) {
        if (config_.optimizer == Optimizer::SGD) {
          params[i] -= lr * grads[i];
        } else {
          m_[i] = config_.adam_beta1 * m_[i] + (1.0 - config_.adam_beta1) * grads[i];
          v_[i] = config_.adam_beta2 * v_[i] + (1.0 - config_.adam_beta2) * grads[i] * grads[i];
          const double mhat = m_[i] / (1.0 - std::pow(config_.adam_beta1, step_));
          const double vhat = v_[i] / (1.0 - std::pow(config_.adam_beta2, step_));
          params[i] -= lr * mhat / (std::sqrt(vhat) + config_.adam_eps);
        }
      }
    }
  }

 private:
  TrainConfig config_;
  Parameters m_, v_;
  double step_ = 0;
};

namespace detail {

inline void check_dataset_matches(const std::vector<LabeledExample>& examples,
                                  const ModelConfig& config, const char* which) {
  for (const LabeledExample& example : examples) {
    const bool is_multilabel = !example.label_bits.empty();
    if (is_multilabel != (config.head_kind == HeadKind::MultiLabel)) {
      throw Error(ErrorKind::Config,
                  std::string(which) + " dataset kind does not match the model head");
    }
    if (is_multilabel && example.label_bits.size() != config.label_count) {
      throw Error(ErrorKind::Config,
                  std::string(which) + " bitset width does not match label_count");
    }
    if (!is_multilabel &&
        (example.label < 0 || static_cast<size_t>(example.label) >= config.label_count)) {
      throw Error(ErrorKind::Config, std::string(which) + " label out of range");
    }
    if (example.doc.tokens.empty()) {
      throw Error(ErrorKind::Config,
                  std::string(which) + " dataset is not tokenized (empty document)");
    }
  }
}

// Dev-set accuracy: argmax hit rate for multi-class, mean per-emoji binary
// decision accuracy for multi-label.
inline double dev_accuracy(const std::vector<LabeledExample>& dev, const Parameters& params,
                           const ModelConfig& config) {
  if (dev.empty()) return 0.0;
  double correct = 0.0;
  double total = 0.0;
  for (const LabeledExample& example : dev) {
    const Vec z = logits(example.doc, params, config);
    if (config.head_kind == HeadKind::MultiClass) {
      Eigen::Index argmax = 0;
      z.maxCoeff(&argmax);
      correct += (argmax == example.label) ? 1.0 : 0.0;
      total += 1.0;
    } else {
      for (size_t e = 0; e < config.label_count; ++e) {
        const bool predicted = presence_score(z, e) > 0.5;
        const bool labeled = example.label_bits[e] != 0;
        correct += (predicted == labeled) ? 1.0 : 0.0;
        total += 1.0;
      }
    }
  }
  return correct / total;
}

}  // namespace detail

// Deterministic mini-batch training from explicit initial parameters.
inline TrainResult train_from(Parameters params, const std::vector<LabeledExample>& train_set,
                              const std::vector<LabeledExample>& dev_set,
                              const ModelConfig& model_config, const TrainConfig& train_config) {
  model_config.validate();
  train_config.validate();
  if (train_set.empty()) throw Error(ErrorKind::Config, "training set is empty");
  detail::check_dataset_matches(train_set, model_config, "train");
  detail::check_dataset_matches(dev_set, model_config, "dev");

  TrainResult result{std::move(params), {}};
  OptimizerState optimizer(model_config, train_config);
  Parameters grads = Parameters::build(model_config);

  std::vector<size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (size_t epoch = 1; epoch <= train_config.epochs; ++epoch) {
    Rng shuffle_rng(train_config.seed, "shuffle.epoch" + std::to_string(epoch));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    for (size_t begin = 0; begin < order.size(); begin += train_config.batch_size) {
      const size_t end = std::min(begin + train_config.batch_size, order.size());
      std::vector<const LabeledExample*> batch;
      batch.reserve(end - begin);
      for (size_t i = begin; i < end; ++i) batch.push_back(&train_set[order[i]]);
      const double batch_mean = backprop(batch, result.params, model_config, grads);
      loss_sum += batch_mean * static_cast<double>(batch.size());
      optimizer.apply(result.params, grads);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train_set.size());
    if (!dev_set.empty()) {
      std::vector<const LabeledExample*> dev_batch;
      dev_batch.reserve(dev_set.size());
      for (const LabeledExample& example : dev_set) dev_batch.push_back(&example);
      stats.dev_loss = batch_loss(dev_batch, result.params, model_config);
      stats.dev_accuracy = detail::dev_accuracy(dev_set, result.params, model_config);
    }
    result.history.push_back(stats);
  }
  return result;
}

// Standard entry point: seeded initialization, then train_from.
inline TrainResult train(const std::vector<LabeledExample>& train_set,
                         const std::vector<LabeledExample>& dev_set,
                         const ModelConfig& model_config, const TrainConfig& train_config) {
  Parameters params = Parameters::build(model_config);
  params.init(train_config.seed);
  return train_from(std::move(params), train_set, dev_set, model_config, train_config);
}

inline nlohmann::json epoch_stats_to_json(const EpochStats& s) {
  return nlohmann::json{{"epoch", s.epoch},
                        {"train_loss", s.train_loss},
                        {"dev_loss", s.dev_loss},
                        {"dev_accuracy", s.dev_accuracy}};
}

}  // namespace emojipred
