// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "emojipred/error.hpp"
#include "emojipred/hash.hpp"

#ifndef EMOJIPRED_DEFAULT_UNICODE_DIR
#define EMOJIPRED_DEFAULT_UNICODE_DIR ""
#endif

namespace emojipred {

// emoji-test.txt qualification statuses. Component covers the standalone
// pieces (skin tones, lone regional indicators) that only normally appear
// inside longer sequences.
enum class Qualification {
  FullyQualified,
  MinimallyQualified,
  Unqualified,
  Component,
};

inline const char* to_string(Qualification q) {
  switch (q) {
    case Qualification::FullyQualified: return "fully-qualified";
    case Qualification::MinimallyQualified: return "minimally-qualified";
    case Qualification::Unqualified: return "unqualified";
    case Qualification::Component: return "component";
  }
  return "?";
}

// Immutable view of the Unicode emoji data files: the binary properties from
// emoji-data.txt plus the RGI sequence list and statuses from emoji-test.txt.
// Load once, share freely across threads.
class EmojiDataTable {
 public:
  static constexpr char32_t kZwj = 0x200D;
  static constexpr char32_t kVs15 = 0xFE0E;
  static constexpr char32_t kVs16 = 0xFE0F;
  static constexpr char32_t kKeycapMark = 0x20E3;

  static EmojiDataTable load(const std::string& emoji_data_path,
                             const std::string& emoji_test_path) {
    EmojiDataTable table;
    table.parse_emoji_data(emoji_data_path);
    table.parse_emoji_test(emoji_test_path);
    table.validate();
    table.data_file_hash_ = hash_file_hex(emoji_data_path);
    table.test_file_hash_ = hash_file_hex(emoji_test_path);
    return table;
  }

  // Resolves the bundled data directory: $EMOJIPRED_UNICODE_DIR if set,
  // otherwise the path baked in at build time.
  static std::string default_dir() {
    if (const char* env = std::getenv("EMOJIPRED_UNICODE_DIR")) {
      return env;
    }
    std::string dir = EMOJIPRED_DEFAULT_UNICODE_DIR;
    if (dir.empty()) {
      throw Error(ErrorKind::Config,
                  "no Unicode data directory configured; set EMOJIPRED_UNICODE_DIR");
    }
    return dir;
  }

  static EmojiDataTable load_default() {
    const std::string dir = default_dir();
    return load(dir + "/emoji-data.txt", dir + "/emoji-test.txt");
  }

  bool is_emoji(char32_t cp) const { return emoji_.count(cp) != 0; }
  bool is_presentation(char32_t cp) const { return presentation_.count(cp) != 0; }
  bool is_modifier(char32_t cp) const { return modifier_.count(cp) != 0; }
  bool is_modifier_base(char32_t cp) const { return modifier_base_.count(cp) != 0; }
  bool is_component(char32_t cp) const { return component_.count(cp) != 0; }

  static bool is_regional_indicator(char32_t cp) { return cp >= 0x1F1E6 && cp <= 0x1F1FF; }
  static bool is_keycap_base(char32_t cp) {
    return (cp >= U'0' && cp <= U'9') || cp == U'#' || cp == U'*';
  }
  static bool is_tag_spec(char32_t cp) { return cp >= 0xE0020 && cp <= 0xE007E; }
  static constexpr char32_t kTagEnd = 0xE007F;

  bool is_rgi(const std::u32string& seq) const { return rgi_.count(seq) != 0; }

  // Status from emoji-test.txt for sequences listed there.
  const Qualification* listed_status(const std::u32string& seq) const {
    auto it = status_.find(seq);
    return it == status_.end() ? nullptr : &it->second;
  }

  // Maps a sequence to its fully-qualified RGI form when the two differ only
  // by VS-16 characters; returns the input unchanged otherwise.
  std::u32string canonical_form(const std::u32string& seq) const {
    if (rgi_.count(seq)) return seq;
    auto it = canonical_.find(strip_vs16(seq));
    return it == canonical_.end() ? seq : it->second;
  }

  const std::vector<std::u32string>& rgi_sequences() const { return rgi_ordered_; }

  const std::string& unicode_version() const { return unicode_version_; }
  const std::string& data_file_hash() const { return data_file_hash_; }
  const std::string& test_file_hash() const { return test_file_hash_; }

  static std::u32string strip_vs16(const std::u32string& seq) {
    std::u32string out;
    for (char32_t cp : seq) {
      if (cp != kVs16) out.push_back(cp);
    }
    return out;
  }

 private:
  void parse_emoji_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw Error(ErrorKind::Io, "cannot open emoji data file: " + path);
    }
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      grab_version(line);
      strip_comment(line);
      if (line.empty()) continue;
      const size_t semi = line.find(';');
      if (semi == std::string::npos) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": missing ';'");
      }
      const std::string range = trim(line.substr(0, semi));
      const std::string prop = trim(line.substr(semi + 1));
      char32_t lo = 0, hi = 0;
      const size_t dots = range.find("..");
      if (dots == std::string::npos) {
        lo = hi = parse_hex(range, path, line_no);
      } else {
        lo = parse_hex(range.substr(0, dots), path, line_no);
        hi = parse_hex(range.substr(dots + 2), path, line_no);
      }
      std::unordered_set<char32_t>* target = nullptr;
      if (prop == "Emoji") target = &emoji_;
      else if (prop == "Emoji_Presentation") target = &presentation_;
      else if (prop == "Emoji_Modifier") target = &modifier_;
      else if (prop == "Emoji_Modifier_Base") target = &modifier_base_;
      else if (prop == "Emoji_Component") target = &component_;
      if (target == nullptr) continue;  // e.g. Extended_Pictographic
      for (char32_t cp = lo; cp <= hi; ++cp) target->insert(cp);
    }
    if (emoji_.empty()) {
      throw Error(ErrorKind::Format, path + ": no Emoji property entries found");
    }
  }

  void parse_emoji_test(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw Error(ErrorKind::Io, "cannot open emoji test file: " + path);
    }
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      grab_version(line);
      strip_comment(line);
      if (line.empty()) continue;
      const size_t semi = line.find(';');
      if (semi == std::string::npos) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": missing ';'");
      }
      std::u32string seq;
      std::istringstream cps(line.substr(0, semi));
      std::string tok;
      while (cps >> tok) seq.push_back(parse_hex(tok, path, line_no));
      if (seq.empty()) {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": empty sequence");
      }
      const std::string status = trim(line.substr(semi + 1));
      Qualification q;
      if (status == "fully-qualified") q = Qualification::FullyQualified;
      else if (status == "minimally-qualified") q = Qualification::MinimallyQualified;
      else if (status == "unqualified") q = Qualification::Unqualified;
      else if (status == "component") q = Qualification::Component;
      else {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": unknown status " + status);
      }
      status_.emplace(seq, q);
      if (q == Qualification::FullyQualified) {
        rgi_.insert(seq);
        rgi_ordered_.push_back(seq);
        canonical_.emplace(strip_vs16(seq), seq);
      }
    }
    if (rgi_.empty()) {
      throw Error(ErrorKind::Format, path + ": no fully-qualified sequences found");
    }
  }

  void validate() const {
    for (char32_t cp : modifier_) {
      if (!component_.count(cp)) {
        throw Error(ErrorKind::Format, "emoji data: Emoji_Modifier not within Emoji_Component");
      }
    }
    for (char32_t cp = 0x1F1E6; cp <= 0x1F1FF; ++cp) {
      if (!component_.count(cp)) {
        throw Error(ErrorKind::Format, "emoji data: regional indicators missing from Emoji_Component");
      }
    }
  }

  void grab_version(const std::string& line) {
    if (!unicode_version_.empty()) return;
    const std::string marker = "# Version:";
    if (line.rfind(marker, 0) == 0) {
      unicode_version_ = trim(line.substr(marker.size()));
    }
  }

  static void strip_comment(std::string& line) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
  }

  static std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static char32_t parse_hex(const std::string& s, const std::string& path, size_t line_no) {
    char32_t value = 0;
    if (s.empty()) {
      throw Error(ErrorKind::Format, path + ":" + std::to_string(line_no) + ": empty codepoint");
    }
    for (char c : s) {
      value <<= 4;
      if (c >= '0' && c <= '9') value |= static_cast<char32_t>(c - '0');
      else if (c >= 'A' && c <= 'F') value |= static_cast<char32_t>(c - 'A' + 10);
      else if (c >= 'a' && c <= 'f') value |= static_cast<char32_t>(c - 'a' + 10);
      else {
        throw Error(ErrorKind::Format,
                    path + ":" + std::to_string(line_no) + ": bad codepoint '" + s + "'");
      }
    }
    if (value > 0x10FFFF) {
      throw Error(ErrorKind::Format,
                  path + ":" + std::to_string(line_no) + ": codepoint out of range");
    }
    return value;
  }

  std::unordered_set<char32_t> emoji_;
  std::unordered_set<char32_t> presentation_;
  std::unordered_set<char32_t> modifier_;
  std::unordered_set<char32_t> modifier_base_;
  std::unordered_set<char32_t> component_;
  std::unordered_set<std::u32string> rgi_;
  std::vector<std::u32string> rgi_ordered_;
  std::unordered_map<std::u32string, Qualification> status_;
  std::unordered_map<std::u32string, std::u32string> canonical_;
  std::string unicode_version_;
  std::string data_file_hash_;
  std::string test_file_hash_;
};

}  // namespace emojipred
