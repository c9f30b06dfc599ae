// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emojipred/error.hpp"
#include "emojipred/hash.hpp"
#include "emojipred/model.hpp"
#include "emojipred/train.hpp"
#include "emojipred/version.hpp"

namespace emojipred {

// Self-describing checkpoint: magic + format version + JSON header (configs,
// seed, vocabulary hashes, tensor table) + float32 little-endian payload +
// FNV-1a integrity hash over everything before it.
struct Checkpoint {
  ModelConfig model_config;
  std::optional<TrainConfig> train_config;
  uint64_t seed = 0;
  std::string word_vocab_hash;
  std::string emoji_vocab_hash;
  std::string unicode_version;
  std::string toolkit_version;
  Parameters params;
};

namespace detail {

inline constexpr char kCheckpointMagic[4] = {'E', 'P', 'C', 'K'};
inline constexpr uint32_t kCheckpointVersion = 1;

inline void append_u32_le(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void append_u64_le(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

inline uint64_t read_u64_le(const unsigned char* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline void append_f32_le(std::string& out, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, 4);
  append_u32_le(out, bits);
}

inline float read_f32_le(const unsigned char* p) {
  const uint32_t bits = read_u32_le(p);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

}  // namespace detail

inline void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  nlohmann::json header;
  header["model_config"] = model_config_to_json(ckpt.model_config);
  header["train_config"] =
      ckpt.train_config.has_value() ? train_config_to_json(*ckpt.train_config)
                                    : nlohmann::json(nullptr);
  header["seed"] = ckpt.seed;
  header["word_vocab_hash"] = ckpt.word_vocab_hash;
  header["emoji_vocab_hash"] = ckpt.emoji_vocab_hash;
  header["unicode_version"] = ckpt.unicode_version;
  header["toolkit_version"] = ckpt.toolkit_version.empty() ? kToolkitVersion
                                                           : ckpt.toolkit_version;
  nlohmann::json tensors = nlohmann::json::array();
  for (const Parameters::TensorInfo& info : ckpt.params.tensors()) {
    tensors.push_back({{"name", info.name}, {"shape", info.shape}});
  }
  header["tensors"] = tensors;
  const std::string header_bytes = header.dump();

  std::string blob;
  blob.reserve(16 + header_bytes.size() + 4 * ckpt.params.size() + 8);
  blob.append(detail::kCheckpointMagic, 4);
  detail::append_u32_le(blob, detail::kCheckpointVersion);
  detail::append_u64_le(blob, header_bytes.size());
  blob += header_bytes;
  for (size_t i = 0; i < ckpt.params.size(); ++i) {
    detail::append_f32_le(blob, static_cast<float>(ckpt.params[i]));
  }
  detail::append_u64_le(blob, fnv1a(blob));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write checkpoint: " + path);
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw Error(ErrorKind::Io, "short write to checkpoint: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open checkpoint: " + path);
  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (blob.size() < 24 || std::memcmp(blob.data(), detail::kCheckpointMagic, 4) != 0) {
    throw Error(ErrorKind::Checkpoint, path + ": not a checkpoint file");
  }
  const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data());
  const uint64_t stored_hash = detail::read_u64_le(bytes + blob.size() - 8);
  if (fnv1a(std::string_view(blob.data(), blob.size() - 8)) != stored_hash) {
    throw Error(ErrorKind::Checkpoint, path + ": integrity hash mismatch (corrupted file)");
  }
  const uint32_t version = detail::read_u32_le(bytes + 4);
  if (version != detail::kCheckpointVersion) {
    throw Error(ErrorKind::Checkpoint,
                path + ": unsupported checkpoint version " + std::to_string(version));
  }
  const uint64_t header_len = detail::read_u64_le(bytes + 8);
  if (16 + header_len + 8 > blob.size()) {
    throw Error(ErrorKind::Checkpoint, path + ": truncated checkpoint header");
  }
  nlohmann::json header = nlohmann::json::parse(
      blob.substr(16, header_len), nullptr, /*allow_exceptions=*/false);
  if (header.is_discarded()) {
    throw Error(ErrorKind::Checkpoint, path + ": checkpoint header is not valid JSON");
  }

  Checkpoint ckpt;
  try {
    ckpt.model_config = model_config_from_json(header.at("model_config"));
    if (!header.at("train_config").is_null()) {
      ckpt.train_config = train_config_from_json(header.at("train_config"));
    }
    ckpt.seed = header.at("seed").get<uint64_t>();
    ckpt.word_vocab_hash = header.at("word_vocab_hash").get<std::string>();
    ckpt.emoji_vocab_hash = header.at("emoji_vocab_hash").get<std::string>();
    ckpt.unicode_version = header.at("unicode_version").get<std::string>();
    ckpt.toolkit_version = header.at("toolkit_version").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Checkpoint, path + ": bad checkpoint header: " + e.what());
  }

  ckpt.params = Parameters::build(ckpt.model_config);
  const std::vector<Parameters::TensorInfo>& schema = ckpt.params.tensors();
  const nlohmann::json& tensors = header.at("tensors");
  if (!tensors.is_array() || tensors.size() != schema.size()) {
    throw Error(ErrorKind::Checkpoint, path + ": tensor table does not match model config");
  }
  for (size_t i = 0; i < schema.size(); ++i) {
    if (tensors[i].at("name").get<std::string>() != schema[i].name ||
        tensors[i].at("shape").get<std::vector<size_t>>() != schema[i].shape) {
      throw Error(ErrorKind::Checkpoint,
                  path + ": tensor " + schema[i].name + " missing or reshaped");
    }
  }
  const size_t payload = blob.size() - 16 - header_len - 8;
  if (payload != 4 * ckpt.params.size()) {
    throw Error(ErrorKind::Checkpoint, path + ": parameter payload size mismatch");
  }
  const unsigned char* p = bytes + 16 + header_len;
  for (size_t i = 0; i < ckpt.params.size(); ++i, p += 4) {
    ckpt.params[i] = static_cast<double>(detail::read_f32_le(p));
  }
  return ckpt;
}

}  // namespace emojipred
