// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace emojipred {

enum class UrlPolicy { Keep, ReplaceToken };
enum class HashtagPolicy { KeepTextPart };
enum class MentionPolicy { Keep };

// Knobs for text normalization. The defaults reproduce the observable
// conventions of the source data: digit runs become "num", hashtags keep
// their text part, mentions and case pass through untouched.
struct NormalizationConfig {
  bool replace_digit_runs = true;
  bool lowercase = false;
  UrlPolicy url_policy = UrlPolicy::Keep;
  HashtagPolicy hashtag_policy = HashtagPolicy::KeepTextPart;
  MentionPolicy mention_policy = MentionPolicy::Keep;
};

namespace detail {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool looks_like_url(std::string_view token) {
  return token.rfind("http://", 0) == 0 || token.rfind("https://", 0) == 0 ||
         token.rfind("www.", 0) == 0;
}

}  // namespace detail

// Normalizes one whitespace-delimited token in place; returns the rewritten
// token, possibly empty (e.g. a bare "#").
inline std::string normalize_token(std::string_view token, const NormalizationConfig& config) {
  // Hashtags keep only their text part. Stripping every leading '#' keeps
  // the operation idempotent on degenerate inputs like "##tag".
  while (!token.empty() && token.front() == '#') token.remove_prefix(1);
  if (token.empty()) return "";

  if (config.url_policy == UrlPolicy::ReplaceToken && detail::looks_like_url(token)) {
    return "<url>";
  }

  std::string out;
  out.reserve(token.size());
  size_t i = 0;
  while (i < token.size()) {
    const char c = token[i];
    if (config.replace_digit_runs && c >= '0' && c <= '9') {
      while (i < token.size() && token[i] >= '0' && token[i] <= '9') ++i;
      out += "num";
      continue;
    }
    out.push_back(config.lowercase && c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    ++i;
  }
  return out;
}

// Whitespace-splits `text`, normalizes each token, and rejoins with single
// spaces. Idempotent under any fixed config. Emojis, if still present, pass
// through untouched (stripping them is a separate, earlier step).
inline std::string normalize(std::string_view text, const NormalizationConfig& config = {}) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_ascii_space(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !detail::is_ascii_space(text[i])) ++i;
    if (i == start) break;
    const std::string token = normalize_token(text.substr(start, i - start), config);
    if (token.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

}  // namespace emojipred
