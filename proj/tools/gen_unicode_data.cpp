// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0
//
// Regenerates the vendored Unicode emoji data files under data/unicode/ from
// the ICU library installed on the build machine. The output follows the
// standard emoji-data.txt / emoji-test.txt layout so the files stay
// interchangeable with the ones published by the Unicode consortium.
//
// Usage: gen_unicode_data <out_dir>

#include <unicode/uchar.h>
#include <unicode/uset.h>
#include <unicode/ustring.h>
#include <unicode/uversion.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace {

std::string unicode_version() {
  UVersionInfo info;
  u_getUnicodeVersion(info);
  return std::to_string(info[0]) + "." + std::to_string(info[1]);
}

std::string hex(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04X", static_cast<uint32_t>(cp));
  return buf;
}

std::string hex_seq(const std::vector<char32_t>& cps) {
  std::string out;
  for (size_t i = 0; i < cps.size(); ++i) {
    if (i) out += ' ';
    out += hex(cps[i]);
  }
  return out;
}

std::string utf8_of(const std::vector<char32_t>& cps) {
  std::string out;
  for (char32_t cp : cps) {
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
  return out;
}

std::string char_name(char32_t cp) {
  char buf[256];
  UErrorCode st = U_ZERO_ERROR;
  int32_t n = u_charName(cp, U_UNICODE_CHAR_NAME, buf, sizeof(buf), &st);
  if (U_FAILURE(st) || n <= 0) return "";
  std::string name(buf, static_cast<size_t>(n));
  for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return name;
}

std::string seq_name(const std::vector<char32_t>& cps) {
  std::string out;
  for (char32_t cp : cps) {
    if (cp == 0xFE0F || cp == 0x200D) continue;
    std::string n = char_name(cp);
    if (n.empty()) continue;
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

void write_property_ranges(std::ofstream& out, const char* prop_name, UProperty prop) {
  out << "\n# ================================================\n\n";
  bool in_range = false;
  char32_t range_start = 0;
  char32_t prev = 0;
  auto flush = [&](char32_t last) {
    if (!in_range) return;
    if (range_start == last) {
      out << hex(range_start) << "          ; " << prop_name << " # "
          << char_name(range_start) << "\n";
    } else {
      out << hex(range_start) << ".." << hex(last) << "    ; " << prop_name << " # "
          << char_name(range_start) << ".." << char_name(last) << "\n";
    }
    in_range = false;
  };
  for (char32_t cp = 0; cp <= 0x10FFFF; ++cp) {
    if (cp >= 0xD800 && cp <= 0xDFFF) continue;
    bool has = u_hasBinaryProperty(static_cast<UChar32>(cp), prop);
    if (has) {
      if (!in_range) {
        in_range = true;
        range_start = cp;
      } else if (cp != prev + 1) {
        flush(prev);
        in_range = true;
        range_start = cp;
      }
      prev = cp;
    } else if (in_range) {
      flush(prev);
    }
  }
  flush(prev);
}

std::vector<std::vector<char32_t>> rgi_sequences() {
  UErrorCode st = U_ZERO_ERROR;
  USet* set = uset_openPattern(u"[\\p{RGI_Emoji}]", -1, &st);
  if (U_FAILURE(st) || set == nullptr) {
    std::cerr << "failed to open RGI_Emoji set: " << u_errorName(st) << "\n";
    std::exit(1);
  }
  std::vector<std::vector<char32_t>> seqs;
  int32_t count = uset_getItemCount(set);
  for (int32_t i = 0; i < count; ++i) {
    UChar32 start = 0;
    UChar32 end = 0;
    UChar buf[64];
    st = U_ZERO_ERROR;
    int32_t len = uset_getItem(set, i, &start, &end, buf, 64, &st);
    if (U_FAILURE(st)) {
      std::cerr << "uset_getItem failed: " << u_errorName(st) << "\n";
      std::exit(1);
    }
    if (len == 0) {
      for (UChar32 cp = start; cp <= end; ++cp) {
        seqs.push_back({static_cast<char32_t>(cp)});
      }
    } else {
      std::vector<char32_t> cps;
      int32_t j = 0;
      while (j < len) {
        UChar32 cp;
        U16_NEXT(buf, j, len, cp);
        cps.push_back(static_cast<char32_t>(cp));
      }
      seqs.push_back(std::move(cps));
    }
  }
  uset_close(set);
  std::sort(seqs.begin(), seqs.end());
  return seqs;
}

// A sequence element's leading character counts as qualified when it carries
// Emoji_Presentation, is immediately followed by VS-16, or opens an emoji
// modifier sequence (which never takes VS-16).
bool first_element_qualified(const std::vector<char32_t>& cps) {
  if (cps.empty()) return false;
  if (u_hasBinaryProperty(static_cast<UChar32>(cps[0]), UCHAR_EMOJI_PRESENTATION)) return true;
  if (cps.size() > 1 && cps[1] == 0xFE0F) return true;
  return cps.size() > 1 && u_hasBinaryProperty(static_cast<UChar32>(cps[0]), UCHAR_EMOJI_MODIFIER_BASE) &&
         u_hasBinaryProperty(static_cast<UChar32>(cps[1]), UCHAR_EMOJI_MODIFIER);
}

bool is_component_cp(char32_t cp) {
  return (cp >= 0x1F3FB && cp <= 0x1F3FF) || (cp >= 0x1F9B0 && cp <= 0x1F9B3);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_unicode_data <out_dir>\n";
    return 2;
  }
  const std::string out_dir = argv[1];
  const std::string uver = unicode_version();

  {
    std::ofstream out(out_dir + "/emoji-data.txt");
    if (!out) {
      std::cerr << "cannot write " << out_dir << "/emoji-data.txt\n";
      return 1;
    }
    out << "# emoji-data.txt\n";
    out << "# Version: " << uver << "\n";
    out << "# Generated from ICU " << U_ICU_VERSION << " binary property data.\n";
    out << "# Format: <codepoint(s)> ; <property> # <comment>\n";
    write_property_ranges(out, "Emoji", UCHAR_EMOJI);
    write_property_ranges(out, "Emoji_Presentation", UCHAR_EMOJI_PRESENTATION);
    write_property_ranges(out, "Emoji_Modifier", UCHAR_EMOJI_MODIFIER);
    write_property_ranges(out, "Emoji_Modifier_Base", UCHAR_EMOJI_MODIFIER_BASE);
    write_property_ranges(out, "Emoji_Component", UCHAR_EMOJI_COMPONENT);
    write_property_ranges(out, "Extended_Pictographic", UCHAR_EXTENDED_PICTOGRAPHIC);
    out << "\n# EOF\n";
  }

  {
    auto fq = rgi_sequences();
    // emoji-test.txt lists skin tones and hair styles under the separate
    // `component` status, not as fully-qualified rows.
    std::erase_if(fq, [](const std::vector<char32_t>& s) {
      return s.size() == 1 && is_component_cp(s[0]);
    });

    // Non-fully-qualified variants arise from dropping VS-16 in every
    // possible combination, exactly how the published file derives them.
    std::map<std::vector<char32_t>, std::string> variants;
    std::set<std::vector<char32_t>> fq_set(fq.begin(), fq.end());
    for (const auto& seq : fq) {
      std::vector<size_t> vs_pos;
      for (size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] == 0xFE0F) vs_pos.push_back(i);
      }
      if (vs_pos.empty()) continue;
      const size_t m = vs_pos.size();
      for (size_t mask = 1; mask < (size_t{1} << m); ++mask) {
        std::vector<char32_t> v;
        for (size_t i = 0, k = 0; i < seq.size(); ++i) {
          if (k < m && vs_pos[k] == i) {
            bool drop = (mask >> k) & 1;
            ++k;
            if (drop) continue;
          }
          v.push_back(seq[i]);
        }
        if (fq_set.count(v)) continue;
        std::string status = first_element_qualified(v) ? "minimally-qualified" : "unqualified";
        auto it = variants.find(v);
        // minimally-qualified wins if the same variant is derivable both ways
        if (it == variants.end() || (it->second == "unqualified" && status == "minimally-qualified")) {
          variants[v] = status;
        }
      }
    }

    std::ofstream out(out_dir + "/emoji-test.txt");
    if (!out) {
      std::cerr << "cannot write " << out_dir << "/emoji-test.txt\n";
      return 1;
    }
    out << "# emoji-test.txt\n";
    out << "# Version: " << uver << "\n";
    out << "# Generated from the ICU " << U_ICU_VERSION << " RGI_Emoji property of strings.\n";
    out << "# Format: <codepoint(s)> ; <status> # <emoji> <name>\n";
    out << "\n";

    size_t n_fq = 0, n_mq = 0, n_uq = 0;
    for (const auto& seq : fq) {
      out << hex_seq(seq) << " ; fully-qualified # " << utf8_of(seq) << " " << seq_name(seq)
          << "\n";
      ++n_fq;
      // keep derived variants next to their parent, like the published file
      std::vector<size_t> vs_pos;
      for (size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] == 0xFE0F) vs_pos.push_back(i);
      }
      if (vs_pos.empty()) continue;
      const size_t m = vs_pos.size();
      std::vector<std::vector<char32_t>> local;
      for (size_t mask = 1; mask < (size_t{1} << m); ++mask) {
        std::vector<char32_t> v;
        for (size_t i = 0, k = 0; i < seq.size(); ++i) {
          if (k < m && vs_pos[k] == i) {
            bool drop = (mask >> k) & 1;
            ++k;
            if (drop) continue;
          }
          v.push_back(seq[i]);
        }
        local.push_back(std::move(v));
      }
      std::sort(local.begin(), local.end());
      local.erase(std::unique(local.begin(), local.end()), local.end());
      for (const auto& v : local) {
        auto it = variants.find(v);
        if (it == variants.end()) continue;  // already emitted or fully qualified
        out << hex_seq(v) << " ; " << it->second << " # " << utf8_of(v) << " " << seq_name(v)
            << "\n";
        if (it->second == "minimally-qualified") {
          ++n_mq;
        } else {
          ++n_uq;
        }
        variants.erase(it);
      }
    }

    out << "\n# Component\n";
    size_t n_comp = 0;
    auto component = [&](char32_t cp) {
      std::vector<char32_t> v{cp};
      out << hex_seq(v) << " ; component # " << utf8_of(v) << " " << char_name(cp) << "\n";
      ++n_comp;
    };
    for (char32_t cp = 0x1F3FB; cp <= 0x1F3FF; ++cp) component(cp);
    for (char32_t cp = 0x1F9B0; cp <= 0x1F9B3; ++cp) component(cp);

    out << "\n# Status Counts\n";
    out << "# fully-qualified : " << n_fq << "\n";
    out << "# minimally-qualified : " << n_mq << "\n";
    out << "# unqualified : " << n_uq << "\n";
    out << "# component : " << n_comp << "\n";
    out << "# EOF\n";
    std::cout << "emoji-test.txt: " << n_fq << " fully-qualified, " << n_mq
              << " minimally-qualified, " << n_uq << " unqualified, " << n_comp
              << " component\n";
  }

  std::cout << "wrote " << out_dir << "/emoji-data.txt and " << out_dir
            << "/emoji-test.txt (Unicode " << uver << ")\n";
  return 0;
}
