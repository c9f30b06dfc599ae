// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "emojipred/error.hpp"
#include "emojipred/version.hpp"

namespace emojipred {

// Provenance record written next to every output artifact. Deliberately
// timestamp-free: re-running the same manifest must reproduce outputs
// bit-exactly, and the manifest itself is part of that contract.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config;  // full config snapshot
  std::map<std::string, std::string> input_hashes;
  uint64_t seed = 0;
  std::string toolkit_version = kToolkitVersion;
  std::string unicode_version;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["subcommand"] = m.subcommand;
  j["config"] = m.config;
  j["input_hashes"] = m.input_hashes;
  j["seed"] = m.seed;
  j["toolkit_version"] = m.toolkit_version;
  j["unicode_version"] = m.unicode_version;
  return j;
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write manifest: " + path);
  out << manifest_to_json(m).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "short write to manifest: " + path);
}

}  // namespace emojipred
