// Copyright 2026 The foundtts Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "foundtts/error.hpp"
#include "foundtts/text/utf8.hpp"

namespace foundtts {

enum class PunctuationPolicy { kIgnore, kKeep, kReject };

enum class GraphemeKind { kBase, kExtension, kDiacritic, kPunctuation, kOther };

/// Raised when text contains characters outside the vocabulary.
class OovError : public InputError {
 public:
  OovError(std::vector<char32_t> cps, long line = 0)
      : InputError(describe(cps, line)), code_points_(std::move(cps)), line_(line) {}
  const std::vector<char32_t>& code_points() const { return code_points_; }
  long line() const { return line_; }

  static std::string describe(const std::vector<char32_t>& cps, long line) {
    std::string msg = line > 0 ? "line " + std::to_string(line) + ": " : "";
    msg += "out-of-vocabulary characters:";
    for (char32_t cp : cps) msg += " " + utf8::code_point_label(cp) + " '" + utf8::encode(cp) + "'";
    return msg;
  }

 private:
  std::vector<char32_t> code_points_;
  long line_;
};

/// Arabic-script letters plus the Darija extension letters (veh, peh, ng)
/// and the standard set of combining marks.
struct GraphemeVocabulary {
  std::set<char32_t> base;
  std::set<char32_t> extensions;
  std::set<char32_t> diacritics;
  std::set<char32_t> punctuation;
  PunctuationPolicy punctuation_policy = PunctuationPolicy::kIgnore;

  static GraphemeVocabulary darija() {
    GraphemeVocabulary v;
    for (char32_t c = 0x0621; c <= 0x063A; ++c) v.base.insert(c);
    for (char32_t c = 0x0641; c <= 0x064A; ++c) v.base.insert(c);
    v.extensions = {0x06A4, 0x067E, 0x06AD};  // ڤ پ ڭ
    for (char32_t c = 0x064B; c <= 0x0652; ++c) v.diacritics.insert(c);  // tanween, harakat, shadda, sukun
    v.diacritics.insert(0x0670);  // superscript alef
    for (char32_t c : std::u32string_view(U"!\"'(),-.:;?[]{}«»،؛؟۔…"))
      v.punctuation.insert(c);
    return v;
  }

  GraphemeKind kind(char32_t cp) const {
    if (base.count(cp)) return GraphemeKind::kBase;
    if (extensions.count(cp)) return GraphemeKind::kExtension;
    if (diacritics.count(cp)) return GraphemeKind::kDiacritic;
    if (punctuation.count(cp)) return GraphemeKind::kPunctuation;
    return GraphemeKind::kOther;
  }

  bool is_letter(char32_t cp) const {
    const auto k = kind(cp);
    return k == GraphemeKind::kBase || k == GraphemeKind::kExtension;
  }

  void validate() const {
    for (char32_t c : extensions)
      if (base.count(c)) throw ConfigError("vocabulary: extension letter " + utf8::code_point_label(c) + " is also a base letter");
  }
};

inline bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == 0x00A0 || cp == 0x200F ||
         cp == 0x200E || (cp >= 0x2000 && cp <= 0x200A);
}

/// Splits text into single-code-point graphemes. Whitespace separates words
/// and is not emitted. Diacritics are separate tokens, so a shadda with a
/// fatha on one letter yields three tokens.
inline std::vector<std::string> grapheme_tokenize(std::string_view text, const GraphemeVocabulary& vocab) {
  std::vector<std::string> tokens;
  std::vector<char32_t> oov;
  for (char32_t cp : utf8::decode(text)) {
    if (is_space(cp)) continue;
    switch (vocab.kind(cp)) {
      case GraphemeKind::kBase:
      case GraphemeKind::kExtension:
      case GraphemeKind::kDiacritic:
        tokens.push_back(utf8::encode(cp));
        break;
      case GraphemeKind::kPunctuation:
        if (vocab.punctuation_policy == PunctuationPolicy::kKeep) tokens.push_back(utf8::encode(cp));
        else if (vocab.punctuation_policy == PunctuationPolicy::kReject) oov.push_back(cp);
        break;
      case GraphemeKind::kOther:
        oov.push_back(cp);
        break;
    }
  }
  if (!oov.empty()) {
    std::sort(oov.begin(), oov.end());
    oov.erase(std::unique(oov.begin(), oov.end()), oov.end());
    throw OovError(std::move(oov));
  }
  return tokens;
}

}  // namespace foundtts
