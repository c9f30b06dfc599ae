// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "emojipred/error.hpp"

namespace emojipred::utf8 {

struct Decoded {
  char32_t cp;
  size_t length;  // bytes consumed
};

// Decodes the scalar starting at `pos`. Rejects overlong forms, surrogates
// and out-of-range values so that every accepted byte span round-trips.
inline Decoded decode(std::string_view text, size_t pos) {
  const auto byte = [&](size_t i) { return static_cast<unsigned char>(text[i]); };
  if (pos >= text.size()) {
    throw Error(ErrorKind::Unicode, "utf8: decode past end of input");
  }
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    return {b0, 1};
  }
  auto fail = [&]() -> Decoded {
    throw Error(ErrorKind::Unicode,
                "utf8: invalid byte sequence at offset " + std::to_string(pos));
  };
  auto cont = [&](size_t i) {
    return pos + i < text.size() && (byte(pos + i) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0) {
    if (!cont(1)) return fail();
    char32_t cp = ((b0 & 0x1Fu) << 6) | (byte(pos + 1) & 0x3Fu);
    if (cp < 0x80) return fail();
    return {cp, 2};
  }
  if ((b0 & 0xF0) == 0xE0) {
    if (!cont(1) || !cont(2)) return fail();
    char32_t cp = ((b0 & 0x0Fu) << 12) | ((byte(pos + 1) & 0x3Fu) << 6) |
                  (byte(pos + 2) & 0x3Fu);
    if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) return fail();
    return {cp, 3};
  }
  if ((b0 & 0xF8) == 0xF0) {
    if (!cont(1) || !cont(2) || !cont(3)) return fail();
    char32_t cp = ((b0 & 0x07u) << 18) | ((byte(pos + 1) & 0x3Fu) << 12) |
                  ((byte(pos + 2) & 0x3Fu) << 6) | (byte(pos + 3) & 0x3Fu);
    if (cp < 0x10000 || cp > 0x10FFFF) return fail();
    return {cp, 4};
  }
  return fail();
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

inline std::string encode(const std::vector<char32_t>& cps) {
  std::string out;
  for (char32_t cp : cps) append(out, cp);
  return out;
}

inline std::string encode(std::u32string_view cps) {
  std::string out;
  for (char32_t cp : cps) append(out, cp);
  return out;
}

inline std::vector<char32_t> decode_all(std::string_view text) {
  std::vector<char32_t> out;
  size_t pos = 0;
  while (pos < text.size()) {
    Decoded d = decode(text, pos);
    out.push_back(d.cp);
    pos += d.length;
  }
  return out;
}

inline bool is_valid(std::string_view text) {
  size_t pos = 0;
  while (pos < text.size()) {
    try {
      pos += decode(text, pos).length;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

}  // namespace emojipred::utf8
