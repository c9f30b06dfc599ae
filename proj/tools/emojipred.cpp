// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0
//
// Operator CLI binding the toolkit into reproducible pipeline runs:
//   build-dataset  raw corpus -> labeled train/dev/test + vocabularies
//   train          dataset -> checkpoint + per-epoch history
//   eval           checkpoint + split -> metrics report
//   predict        checkpoint + text -> ranked or thresholded emojis
//   stats          dataset -> aggregate shape report
//
// Everything beyond paths, seeds, and K comes from JSON config files so the
// manifest written next to each output captures the entire run.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "emojipred/checkpoint.hpp"
#include "emojipred/corpus.hpp"
#include "emojipred/dataset.hpp"
#include "emojipred/emoji_data.hpp"
#include "emojipred/emoji_vocab.hpp"
#include "emojipred/error.hpp"
#include "emojipred/evaluate.hpp"
#include "emojipred/hash.hpp"
#include "emojipred/manifest.hpp"
#include "emojipred/metrics.hpp"
#include "emojipred/model.hpp"
#include "emojipred/normalize.hpp"
#include "emojipred/segment.hpp"
#include "emojipred/train.hpp"
#include "emojipred/version.hpp"
#include "emojipred/word_vocab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace emojipred;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return 2;
    case ErrorKind::Config: return 3;
    case ErrorKind::Format: return 4;
    case ErrorKind::Unicode: return 5;
    case ErrorKind::Shape: return 6;
    case ErrorKind::Numeric: return 7;
    case ErrorKind::Checkpoint: return 8;
  }
  return 1;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file: " + path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw Error(ErrorKind::Config, path + ": not valid JSON");
  }
  return j;
}

// Model configs in files may be partial; unset fields keep the desk-scale
// defaults, and data-dependent fields are filled from the dataset.
ModelConfig model_config_from_partial(const json& j, const ModelConfig& base) {
  ModelConfig c = base;
  if (j.contains("layers")) c.layers = j.at("layers").get<size_t>();
  if (j.contains("heads")) c.heads = j.at("heads").get<size_t>();
  if (j.contains("hidden")) c.hidden = j.at("hidden").get<size_t>();
  if (j.contains("ffn_dim")) c.ffn_dim = j.at("ffn_dim").get<size_t>();
  if (j.contains("max_seq_len")) c.max_seq_len = j.at("max_seq_len").get<size_t>();
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    ModelConfig p;
    if (preset == "desk-scale") p = ModelConfig::desk_scale();
    else if (preset == "bert-base") p = ModelConfig::bert_base();
    else throw Error(ErrorKind::Config, "unknown model preset: " + preset);
    p.max_seq_len = j.contains("max_seq_len") ? c.max_seq_len : p.max_seq_len;
    p.word_vocab_size = c.word_vocab_size;
    p.label_count = c.label_count;
    p.head_kind = c.head_kind;
    c = p;
    if (j.contains("layers")) c.layers = j.at("layers").get<size_t>();
    if (j.contains("heads")) c.heads = j.at("heads").get<size_t>();
    if (j.contains("hidden")) c.hidden = j.at("hidden").get<size_t>();
    if (j.contains("ffn_dim")) c.ffn_dim = j.at("ffn_dim").get<size_t>();
  }
  return c;
}

TrainConfig train_config_from_partial(const json& j) {
  TrainConfig c;
  if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
  if (j.contains("epochs")) c.epochs = j.at("epochs").get<size_t>();
  if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<size_t>();
  if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
  if (j.contains("optimizer")) {
    c.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
  }
  if (j.contains("adam_beta1")) c.adam_beta1 = j.at("adam_beta1").get<double>();
  if (j.contains("adam_beta2")) c.adam_beta2 = j.at("adam_beta2").get<double>();
  if (j.contains("adam_eps")) c.adam_eps = j.at("adam_eps").get<double>();
  if (j.contains("head_only")) c.head_only = j.at("head_only").get<bool>();
  return c;
}

EmojiDataTable load_table(const std::string& unicode_dir) {
  if (!unicode_dir.empty()) {
    return EmojiDataTable::load(unicode_dir + "/emoji-data.txt",
                                unicode_dir + "/emoji-test.txt");
  }
  return EmojiDataTable::load_default();
}

// ---------------------------------------------------------------------------
// build-dataset

struct BuildDatasetArgs {
  std::string corpus_path;
  std::string out_dir;
  std::string unicode_dir;
  size_t k = 20;
  std::string setting = "multiclass";
  uint64_t seed = 0;
  uint64_t min_word_freq = 1;
  std::optional<uint64_t> cap;
  std::optional<uint64_t> floor;
  double train_ratio = 0.8;
  double dev_ratio = 0.1;
  double test_ratio = 0.1;
  bool no_canonicalize = false;
  bool lowercase = false;
  bool replace_urls = false;
  bool keep_digits = false;
};

int cmd_build_dataset(const BuildDatasetArgs& args) {
  const DatasetKind kind = dataset_kind_from_string(args.setting);
  if ((args.cap.has_value() || args.floor.has_value()) && kind != DatasetKind::MultiClass) {
    throw Error(ErrorKind::Config, "balancing (--cap/--floor) applies to multiclass only");
  }
  if (args.cap.has_value() != args.floor.has_value()) {
    throw Error(ErrorKind::Config, "--cap and --floor must be given together");
  }

  const EmojiDataTable table = load_table(args.unicode_dir);

  const CorpusReadResult corpus = read_corpus(args.corpus_path);
  for (size_t line : corpus.malformed_lines) {
    std::cerr << "warning: skipped malformed record at line " << line << "\n";
  }
  if (corpus.malformed_count > corpus.malformed_lines.size()) {
    std::cerr << "warning: " << corpus.malformed_count << " malformed records total\n";
  }
  if (corpus.records.empty()) {
    throw Error(ErrorKind::Format, args.corpus_path + ": no readable records");
  }

  NormalizationConfig prep;
  prep.replace_digit_runs = !args.keep_digits;
  prep.lowercase = args.lowercase;
  prep.url_policy = args.replace_urls ? UrlPolicy::ReplaceToken : UrlPolicy::Keep;

  const std::string corpus_hash = hash_file_hex(args.corpus_path);
  const auto freqs = count_emoji_frequencies(corpus.records, table, !args.no_canonicalize);
  const EmojiVocabulary vocab = build_vocab_topk(freqs, args.k, corpus_hash);

  // Word vocabulary over the stripped, normalized text of the full corpus.
  std::vector<std::string> normalized;
  normalized.reserve(corpus.records.size());
  for (const RawRecord& record : corpus.records) {
    normalized.push_back(normalize(strip_emojis(record.text, table), prep));
  }
  const WordVocabulary words = build_word_vocab(normalized, args.min_word_freq);

  LabelingContext ctx;
  ctx.table = &table;
  ctx.vocab = &vocab;
  ctx.prep = prep;
  ctx.canonicalize = !args.no_canonicalize;

  std::vector<LabeledExample> examples;
  for (const RawRecord& record : corpus.records) {
    if (kind == DatasetKind::MultiClass) {
      for (LabeledExample& e : label_multiclass(record, ctx)) {
        examples.push_back(std::move(e));
      }
    } else if (auto e = label_multilabel(record, ctx)) {
      examples.push_back(std::move(*e));
    }
  }
  if (examples.empty()) {
    throw Error(ErrorKind::Format, "no labeled examples produced from the corpus");
  }

  std::optional<BalanceConfig> balance_config;
  if (args.cap.has_value()) {
    balance_config = BalanceConfig{*args.cap, *args.floor, args.seed};
    examples = balance(examples, *balance_config);
  }

  const SplitRatios ratios{args.train_ratio, args.dev_ratio, args.test_ratio};
  SplitResult splits = split(examples, ratios, args.seed);

  fs::create_directories(args.out_dir);
  const std::string out = args.out_dir;
  vocab.save(out + "/emoji_vocab.tsv");
  words.save(out + "/word_vocab.tsv");

  DatasetHeader header;
  header.kind = kind;
  header.label_count = vocab.size();
  header.emoji_vocab_hash = vocab.content_hash();
  header.seed = args.seed;
  header.normalization = prep;
  header.balance = balance_config;
  header.unicode_version = table.unicode_version();
  auto save_split = [&](const char* name, const std::vector<LabeledExample>& split_examples) {
    header.split_name = name;
    save_dataset(out + "/" + name + ".jsonl", header, split_examples, vocab);
  };
  save_split("train", splits.train);
  save_split("dev", splits.dev);
  save_split("test", splits.test);

  json stats_report;
  stats_report["all"] = stats_to_json(stats(examples, kind, vocab.size()));
  stats_report["train"] = stats_to_json(stats(splits.train, kind, vocab.size()));
  stats_report["dev"] = stats_to_json(stats(splits.dev, kind, vocab.size()));
  stats_report["test"] = stats_to_json(stats(splits.test, kind, vocab.size()));
  {
    std::ofstream sf(out + "/stats.json", std::ios::binary);
    if (!sf) throw Error(ErrorKind::Io, "cannot write stats report");
    sf << stats_report.dump(2) << '\n';
  }

  RunManifest manifest;
  manifest.subcommand = "build-dataset";
  manifest.config = {
      {"k", args.k},
      {"setting", args.setting},
      {"min_word_freq", args.min_word_freq},
      {"canonicalize", !args.no_canonicalize},
      {"normalization", normalization_to_json(prep)},
      {"split_ratios", {args.train_ratio, args.dev_ratio, args.test_ratio}},
      {"balance", balance_config.has_value()
                      ? json{{"cap", balance_config->cap}, {"floor", balance_config->floor}}
                      : json(nullptr)},
  };
  manifest.input_hashes["corpus"] = corpus_hash;
  manifest.input_hashes["emoji-data.txt"] = table.data_file_hash();
  manifest.input_hashes["emoji-test.txt"] = table.test_file_hash();
  manifest.seed = args.seed;
  manifest.unicode_version = table.unicode_version();
  write_manifest(out + "/manifest.json", manifest);

  std::cout << "wrote " << splits.train.size() << " train / " << splits.dev.size()
            << " dev / " << splits.test.size() << " test examples, |E|=" << vocab.size()
            << ", word vocab " << words.size() << " to " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string dataset_dir;
  std::string out_dir;
  std::string model_config_path;
  std::string train_config_path;
};

int cmd_train(const TrainArgs& args) {
  const EmojiVocabulary vocab = EmojiVocabulary::load(args.dataset_dir + "/emoji_vocab.tsv");
  const WordVocabulary words = WordVocabulary::load(args.dataset_dir + "/word_vocab.tsv");
  auto [train_header, train_set] = load_dataset(args.dataset_dir + "/train.jsonl", vocab);
  auto [dev_header, dev_set] = load_dataset(args.dataset_dir + "/dev.jsonl", vocab);
  if (dev_header.kind != train_header.kind) {
    throw Error(ErrorKind::Format, "train/dev splits disagree on dataset kind");
  }

  ModelConfig base = ModelConfig::desk_scale();
  base.word_vocab_size = words.size();
  base.label_count = vocab.size();
  base.head_kind = train_header.kind == DatasetKind::MultiClass ? HeadKind::MultiClass
                                                                : HeadKind::MultiLabel;
  json model_json = args.model_config_path.empty() ? json::object()
                                                   : read_json_file(args.model_config_path);
  if (model_json.contains("head_kind") &&
      head_kind_from_string(model_json.at("head_kind").get<std::string>()) != base.head_kind) {
    throw Error(ErrorKind::Config,
                "model config head_kind conflicts with the dataset kind (" +
                    std::string(to_string(train_header.kind)) + ")");
  }
  const ModelConfig model_config = model_config_from_partial(model_json, base);
  model_config.validate();

  json train_json = args.train_config_path.empty() ? json::object()
                                                   : read_json_file(args.train_config_path);
  const TrainConfig train_config = train_config_from_partial(train_json);
  train_config.validate();

  tokenize_examples(train_set, words, model_config.max_seq_len);
  tokenize_examples(dev_set, words, model_config.max_seq_len);

  TrainResult result = train(train_set, dev_set, model_config, train_config);
  for (const EpochStats& s : result.history) {
    std::cout << "epoch " << s.epoch << "/" << train_config.epochs
              << " train_loss=" << s.train_loss << " dev_loss=" << s.dev_loss
              << " dev_accuracy=" << s.dev_accuracy << "\n";
  }

  fs::create_directories(args.out_dir);
  Checkpoint ckpt;
  ckpt.model_config = model_config;
  ckpt.train_config = train_config;
  ckpt.seed = train_config.seed;
  ckpt.word_vocab_hash = words.content_hash();
  ckpt.emoji_vocab_hash = vocab.content_hash();
  ckpt.unicode_version = train_header.unicode_version;
  ckpt.params = std::move(result.params);
  save_checkpoint(args.out_dir + "/checkpoint.bin", ckpt);

  {
    std::ofstream hist(args.out_dir + "/history.jsonl", std::ios::binary);
    if (!hist) throw Error(ErrorKind::Io, "cannot write history file");
    for (const EpochStats& s : result.history) {
      hist << epoch_stats_to_json(s).dump() << '\n';
    }
  }

  RunManifest manifest;
  manifest.subcommand = "train";
  manifest.config = {{"model_config", model_config_to_json(model_config)},
                     {"train_config", train_config_to_json(train_config)}};
  manifest.input_hashes["train.jsonl"] = hash_file_hex(args.dataset_dir + "/train.jsonl");
  manifest.input_hashes["dev.jsonl"] = hash_file_hex(args.dataset_dir + "/dev.jsonl");
  manifest.input_hashes["emoji_vocab.tsv"] = vocab.content_hash();
  manifest.input_hashes["word_vocab.tsv"] = words.content_hash();
  manifest.seed = train_config.seed;
  manifest.unicode_version = train_header.unicode_version;
  write_manifest(args.out_dir + "/manifest.json", manifest);

  std::cout << "wrote checkpoint to " << args.out_dir << "/checkpoint.bin\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string checkpoint_path;
  std::string dataset_dir;
  std::string split = "test";
  std::string out_dir;
};

int cmd_eval(const EvalArgs& args) {
  const Checkpoint ckpt = load_checkpoint(args.checkpoint_path);
  const EmojiVocabulary vocab = EmojiVocabulary::load(args.dataset_dir + "/emoji_vocab.tsv");
  const WordVocabulary words = WordVocabulary::load(args.dataset_dir + "/word_vocab.tsv");
  if (ckpt.emoji_vocab_hash != vocab.content_hash()) {
    throw Error(ErrorKind::Checkpoint,
                "checkpoint was trained with a different emoji vocabulary");
  }
  if (ckpt.word_vocab_hash != words.content_hash()) {
    throw Error(ErrorKind::Checkpoint,
                "checkpoint was trained with a different word vocabulary");
  }

  const std::string split_path = args.dataset_dir + "/" + args.split + ".jsonl";
  auto [header, examples] = load_dataset(split_path, vocab);
  const HeadKind expected = header.kind == DatasetKind::MultiClass ? HeadKind::MultiClass
                                                                   : HeadKind::MultiLabel;
  if (ckpt.model_config.head_kind != expected) {
    throw Error(ErrorKind::Config, "checkpoint head kind does not match the dataset kind");
  }
  tokenize_examples(examples, words, ckpt.model_config.max_seq_len);

  const MetricsReport report = evaluate(examples, ckpt.params, ckpt.model_config);
  const json report_json = metrics_to_json(report);
  const std::string report_text = metrics_to_text(report);

  if (args.out_dir.empty()) {
    std::cout << report_text;
  } else {
    fs::create_directories(args.out_dir);
    {
      std::ofstream jf(args.out_dir + "/metrics.json", std::ios::binary);
      if (!jf) throw Error(ErrorKind::Io, "cannot write metrics.json");
      jf << report_json.dump(2) << '\n';
    }
    {
      std::ofstream tf(args.out_dir + "/metrics.txt", std::ios::binary);
      if (!tf) throw Error(ErrorKind::Io, "cannot write metrics.txt");
      tf << report_text;
    }
    RunManifest manifest;
    manifest.subcommand = "eval";
    manifest.config = {{"split", args.split}};
    manifest.input_hashes["checkpoint"] = hash_file_hex(args.checkpoint_path);
    manifest.input_hashes[args.split + ".jsonl"] = hash_file_hex(split_path);
    manifest.seed = ckpt.seed;
    manifest.unicode_version = ckpt.unicode_version;
    write_manifest(args.out_dir + "/manifest.json", manifest);
    std::cout << "wrote metrics to " << args.out_dir << "\n";
    std::cout << report_text;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  std::string checkpoint_path;
  std::string dataset_dir;
  std::string text;
  std::string unicode_dir;
  size_t topk = 5;
  double threshold = 0.5;
};

int cmd_predict(const PredictArgs& args) {
  const Checkpoint ckpt = load_checkpoint(args.checkpoint_path);
  const EmojiVocabulary vocab = EmojiVocabulary::load(args.dataset_dir + "/emoji_vocab.tsv");
  const WordVocabulary words = WordVocabulary::load(args.dataset_dir + "/word_vocab.tsv");
  if (ckpt.emoji_vocab_hash != vocab.content_hash()) {
    throw Error(ErrorKind::Checkpoint,
                "checkpoint was trained with a different emoji vocabulary");
  }
  if (ckpt.word_vocab_hash != words.content_hash()) {
    throw Error(ErrorKind::Checkpoint,
                "checkpoint was trained with a different word vocabulary");
  }
  const DatasetHeader header = load_dataset_header(args.dataset_dir + "/train.jsonl");

  const EmojiDataTable table = load_table(args.unicode_dir);
  const std::string normalized = normalize(strip_emojis(args.text, table),
                                           header.normalization);
  const Document doc = tokenize(normalized, words, ckpt.model_config.max_seq_len, "cli");

  if (ckpt.model_config.head_kind == HeadKind::MultiClass) {
    const Vec probs = predict_multiclass(doc, ckpt.params, ckpt.model_config);
    for (int32_t index : rank_topk(probs, args.topk)) {
      std::cout << vocab.utf8_at(static_cast<size_t>(index)) << "\t"
                << probs[index] << "\n";
    }
  } else {
    const Vec z = logits(doc, ckpt.params, ckpt.model_config);
    const std::vector<int32_t> chosen =
        predict_multilabel(doc, ckpt.params, ckpt.model_config, args.threshold);
    if (chosen.empty()) {
      std::cout << "<empty>\n";
    } else {
      for (int32_t index : chosen) {
        std::cout << vocab.utf8_at(static_cast<size_t>(index)) << "\t"
                  << presence_score(z, static_cast<size_t>(index)) << "\n";
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  std::string dataset_dir;
  std::string split = "all";
};

int cmd_stats(const StatsArgs& args) {
  const EmojiVocabulary vocab = EmojiVocabulary::load(args.dataset_dir + "/emoji_vocab.tsv");
  std::vector<std::string> names;
  if (args.split == "all") names = {"train", "dev", "test"};
  else names = {args.split};

  std::vector<LabeledExample> all;
  std::optional<DatasetKind> kind;
  json per_split;
  for (const std::string& name : names) {
    auto [header, examples] = load_dataset(args.dataset_dir + "/" + name + ".jsonl", vocab);
    if (kind.has_value() && *kind != header.kind) {
      throw Error(ErrorKind::Format, "splits disagree on dataset kind");
    }
    kind = header.kind;
    per_split[name] = stats_to_json(stats(examples, header.kind, vocab.size()));
    for (LabeledExample& e : examples) all.push_back(std::move(e));
  }
  json out = std::move(per_split);
  if (names.size() > 1) {
    out["all"] = stats_to_json(stats(all, *kind, vocab.size()));
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(emojipred::kToolkitName) + " " + emojipred::kToolkitVersion +
               " - emoji prediction toolkit"};
  app.require_subcommand(1);

  BuildDatasetArgs bd;
  CLI::App* build = app.add_subcommand("build-dataset",
                                       "Construct labeled datasets from a raw corpus");
  build->add_option("--corpus", bd.corpus_path, "Line-delimited corpus of {id, text} records")
      ->required();
  build->add_option("--out", bd.out_dir, "Output directory")->required();
  build->add_option("--k", bd.k, "Emoji vocabulary size (top-K by frequency)")->required();
  build->add_option("--setting", bd.setting, "multiclass or multilabel")
      ->check(CLI::IsMember({"multiclass", "multilabel"}));
  build->add_option("--seed", bd.seed, "Manifest seed for all sampling");
  build->add_option("--min-word-freq", bd.min_word_freq, "Word vocabulary threshold");
  uint64_t cap_value = 0, floor_value = 0;
  CLI::Option* cap_opt =
      build->add_option("--cap", cap_value, "Balance: max examples per class");
  CLI::Option* floor_opt =
      build->add_option("--floor", floor_value, "Balance: min examples per class");
  build->add_option("--train-ratio", bd.train_ratio, "Train split fraction");
  build->add_option("--dev-ratio", bd.dev_ratio, "Dev split fraction");
  build->add_option("--test-ratio", bd.test_ratio, "Test split fraction");
  build->add_option("--unicode-dir", bd.unicode_dir, "Override bundled Unicode data files");
  build->add_flag("--no-canonicalize", bd.no_canonicalize,
                  "Keep unqualified emoji forms as distinct labels");
  build->add_flag("--lowercase", bd.lowercase, "Lowercase ASCII during normalization");
  build->add_flag("--replace-urls", bd.replace_urls, "Replace URLs with a <url> token");
  build->add_flag("--keep-digits", bd.keep_digits, "Disable digit-run replacement");

  TrainArgs tr;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model on a built dataset");
  train_cmd->add_option("--dataset", tr.dataset_dir, "Dataset directory")->required();
  train_cmd->add_option("--out", tr.out_dir, "Output directory")->required();
  train_cmd->add_option("--model-config", tr.model_config_path, "Model config JSON file");
  train_cmd->add_option("--train-config", tr.train_config_path, "Train config JSON file");

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a split");
  eval_cmd->add_option("--checkpoint", ev.checkpoint_path, "Checkpoint file")->required();
  eval_cmd->add_option("--dataset", ev.dataset_dir, "Dataset directory")->required();
  eval_cmd->add_option("--split", ev.split, "train, dev, or test")
      ->check(CLI::IsMember({"train", "dev", "test"}));
  eval_cmd->add_option("--out", ev.out_dir, "Output directory (stdout when omitted)");

  PredictArgs pr;
  CLI::App* predict_cmd = app.add_subcommand("predict", "Predict emojis for a text");
  predict_cmd->add_option("--checkpoint", pr.checkpoint_path, "Checkpoint file")->required();
  predict_cmd->add_option("--dataset", pr.dataset_dir, "Dataset directory (for vocabularies)")
      ->required();
  predict_cmd->add_option("--text", pr.text, "Input text")->required();
  predict_cmd->add_option("--topk", pr.topk, "Ranked list size (multiclass)");
  predict_cmd->add_option("--threshold", pr.threshold, "Presence threshold (multilabel)");
  predict_cmd->add_option("--unicode-dir", pr.unicode_dir, "Override bundled Unicode data");

  StatsArgs st;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Report dataset statistics");
  stats_cmd->add_option("--dataset", st.dataset_dir, "Dataset directory")->required();
  stats_cmd->add_option("--split", st.split, "train, dev, test, or all")
      ->check(CLI::IsMember({"train", "dev", "test", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: E_CONFIG: " << e.what() << "\n";
    return 3;
  }

  try {
    if (*build) {
      if (cap_opt->count() > 0) bd.cap = cap_value;
      if (floor_opt->count() > 0) bd.floor = floor_value;
      return cmd_build_dataset(bd);
    }
    if (*train_cmd) return cmd_train(tr);
    if (*eval_cmd) return cmd_eval(ev);
    if (*predict_cmd) return cmd_predict(pr);
    if (*stats_cmd) return cmd_stats(st);
  } catch (const emojipred::Error& e) {
    std::cerr << "error: " << emojipred::to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: E_INTERNAL: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
