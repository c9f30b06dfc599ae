// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emojipred/emoji_data.hpp"
#include "emojipred/error.hpp"
#include "emojipred/utf8.hpp"

namespace emojipred {

// One emoji occurrence in a text: the scalar sequence, the byte span it
// occupies, and its qualification status.
struct EmojiToken {
  std::u32string codepoints;
  size_t begin = 0;  // byte offset of the first UTF-8 byte
  size_t end = 0;    // byte offset one past the last UTF-8 byte
  Qualification qualified = Qualification::FullyQualified;

  bool operator==(const EmojiToken& other) const = default;
};

namespace detail {

// A single element of an emoji sequence: a flag pair, a keycap, or an emoji
// character with optional presentation selector / skin tone / tag spec.
struct Element {
  size_t end = 0;  // byte offset just past the element
  std::u32string cps;
  Qualification qual = Qualification::FullyQualified;
  bool component_only = false;  // lone regional indicator or bare skin tone
};

// Peeks the scalar at `pos`, or nullopt at end of input.
inline std::optional<utf8::Decoded> peek(std::string_view text, size_t pos) {
  if (pos >= text.size()) return std::nullopt;
  return utf8::decode(text, pos);
}

// Parses one sequence element starting at `pos`. Returns nullopt when the
// scalar there cannot begin one (plain text, bare digits, selectors, ...).
inline std::optional<Element> parse_element(std::string_view text, size_t pos,
                                            const EmojiDataTable& table) {
  const auto first = peek(text, pos);
  if (!first) return std::nullopt;
  const char32_t c = first->cp;
  size_t cur = pos + first->length;

  // Flags: a regional indicator pairs with a following one; alone it is only
  // a component.
  if (EmojiDataTable::is_regional_indicator(c)) {
    Element e;
    e.cps.push_back(c);
    if (const auto next = peek(text, cur);
        next && EmojiDataTable::is_regional_indicator(next->cp)) {
      e.cps.push_back(next->cp);
      cur += next->length;
      e.qual = Qualification::FullyQualified;
    } else {
      e.qual = Qualification::Component;
      e.component_only = true;
    }
    e.end = cur;
    return e;
  }

  // Keycaps: base [FE0F] 20E3. A bare base or base+VS-15 is plain text.
  if (EmojiDataTable::is_keycap_base(c)) {
    Element e;
    e.cps.push_back(c);
    auto next = peek(text, cur);
    bool has_vs16 = false;
    if (next && next->cp == EmojiDataTable::kVs16) {
      e.cps.push_back(next->cp);
      cur += next->length;
      has_vs16 = true;
      next = peek(text, cur);
    }
    if (next && next->cp == EmojiDataTable::kKeycapMark) {
      e.cps.push_back(next->cp);
      cur += next->length;
      e.qual = has_vs16 ? Qualification::FullyQualified : Qualification::Unqualified;
      e.end = cur;
      return e;
    }
    if (has_vs16) {
      // Explicit emoji presentation of the base character itself.
      e.qual = Qualification::FullyQualified;
      e.end = cur;
      return e;
    }
    return std::nullopt;
  }

  if (!table.is_emoji(c)) return std::nullopt;

  Element e;
  e.cps.push_back(c);
  const auto next = peek(text, cur);
  if (next && next->cp == EmojiDataTable::kVs15) {
    // Explicit text presentation: not an emoji occurrence.
    return std::nullopt;
  }
  if (next && next->cp == EmojiDataTable::kVs16) {
    e.cps.push_back(next->cp);
    cur += next->length;
    e.qual = Qualification::FullyQualified;
  } else if (next && table.is_modifier_base(c) && table.is_modifier(next->cp)) {
    e.cps.push_back(next->cp);
    cur += next->length;
    e.qual = Qualification::FullyQualified;
  } else if (table.is_component(c)) {
    // Bare components only stand alone when they default to emoji
    // presentation; digits and combining marks never do.
    if (!table.is_presentation(c)) return std::nullopt;
    if (table.is_modifier(c)) {
      // A skin tone with no base to attach to: a stray component that can
      // never continue a ZWJ sequence.
      e.qual = Qualification::Component;
      e.component_only = true;
    } else {
      // Pictographic components (hair styles) behave like ordinary emoji
      // characters inside ZWJ sequences; standalone occurrences get their
      // Component status from the published sequence list.
      e.qual = Qualification::FullyQualified;
    }
  } else {
    e.qual = table.is_presentation(c) ? Qualification::FullyQualified
                                      : Qualification::Unqualified;
  }

  // Tag sequences: a run of tag characters must close with the tag
  // terminator to count.
  if (auto tag = peek(text, cur); tag && EmojiDataTable::is_tag_spec(tag->cp)) {
    std::u32string tags;
    size_t tag_end = cur;
    while (tag && EmojiDataTable::is_tag_spec(tag->cp)) {
      tags.push_back(tag->cp);
      tag_end += tag->length;
      tag = peek(text, tag_end);
    }
    if (tag && tag->cp == EmojiDataTable::kTagEnd) {
      tags.push_back(tag->cp);
      tag_end += tag->length;
      e.cps += tags;
      cur = tag_end;
      e.component_only = false;
    }
  }

  e.end = cur;
  return e;
}

// Matches the longest emoji sequence starting exactly at `pos`.
inline std::optional<EmojiToken> match_sequence(std::string_view text, size_t pos,
                                                const EmojiDataTable& table) {
  auto head = parse_element(text, pos, table);
  if (!head) return std::nullopt;

  EmojiToken token;
  token.begin = pos;
  token.codepoints = head->cps;
  size_t cur = head->end;
  const bool head_fq = head->qual == Qualification::FullyQualified;
  bool all_fq = head_fq;
  bool joined = false;

  // Greedily absorb ZWJ + element continuations.
  while (true) {
    const auto zwj = peek(text, cur);
    if (!zwj || zwj->cp != EmojiDataTable::kZwj) break;
    const auto next = parse_element(text, cur + zwj->length, table);
    if (!next || next->component_only) break;
    token.codepoints.push_back(EmojiDataTable::kZwj);
    token.codepoints += next->cps;
    cur = next->end;
    joined = true;
    all_fq = all_fq && next->qual == Qualification::FullyQualified;
  }

  token.end = cur;
  if (!joined) {
    token.qualified = head->qual;
  } else if (all_fq) {
    token.qualified = Qualification::FullyQualified;
  } else {
    token.qualified = head_fq ? Qualification::MinimallyQualified
                              : Qualification::Unqualified;
  }

  // Prefer the statuses published with the sequence data when the exact
  // sequence is listed; the structural rules above cover everything else.
  if (const Qualification* listed = table.listed_status(token.codepoints)) {
    token.qualified = *listed;
  }
  return token;
}

}  // namespace detail

// Scans `text` left to right and returns every emoji occurrence, longest
// match first at each position. Throws on malformed UTF-8.
inline std::vector<EmojiToken> segment(std::string_view text, const EmojiDataTable& table) {
  std::vector<EmojiToken> tokens;
  size_t pos = 0;
  while (pos < text.size()) {
    if (auto token = detail::match_sequence(text, pos, table)) {
      pos = token->end;
      tokens.push_back(std::move(*token));
    } else {
      pos += utf8::decode(text, pos).length;
    }
  }
  return tokens;
}

// Removes every emoji occurrence from `text` and collapses any space runs
// the removals create. Removal can splice new sequences together (a digit
// meeting a stray VS-16, say), so stripping repeats until none remain.
inline std::string strip_emojis(std::string_view text, const EmojiDataTable& table) {
  std::string out(text);
  while (true) {
    const std::vector<EmojiToken> tokens = segment(out, table);
    if (tokens.empty()) break;
    std::string next;
    next.reserve(out.size());
    size_t pos = 0;
    for (const EmojiToken& token : tokens) {
      next.append(out, pos, token.begin - pos);
      pos = token.end;
    }
    next.append(out, pos, out.size() - pos);
    out = std::move(next);
  }

  std::string collapsed;
  collapsed.reserve(out.size());
  for (char ch : out) {
    if (ch == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
    collapsed.push_back(ch);
  }
  return collapsed;
}

// True when `cps` forms exactly one emoji sequence with nothing left over.
inline bool is_emoji_sequence(const std::u32string& cps, const EmojiDataTable& table) {
  if (cps.empty()) return false;
  const std::string encoded = utf8::encode(cps);
  const std::vector<EmojiToken> tokens = segment(encoded, table);
  return tokens.size() == 1 && tokens[0].codepoints == cps &&
         tokens[0].begin == 0 && tokens[0].end == encoded.size();
}

}  // namespace emojipred
