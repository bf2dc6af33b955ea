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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "foundtts/error.hpp"
#include "foundtts/text/utf8.hpp"
#include "foundtts/text/vocabulary.hpp"

namespace foundtts {

/// ASCII value of an ASCII, Arabic-Indic or Persian digit, or -1.
inline int digit_value(char32_t cp) {
  if (cp >= U'0' && cp <= U'9') return static_cast<int>(cp - U'0');
  if (cp >= 0x0660 && cp <= 0x0669) return static_cast<int>(cp - 0x0660);
  if (cp >= 0x06F0 && cp <= 0x06F9) return static_cast<int>(cp - 0x06F0);
  return -1;
}

struct NormalizationRules {
  /// Digit string (ASCII) to spelled-out form.
  std::map<std::string, std::string> number_lexicon;
  std::set<char32_t> strip_set;
  bool keep_diacritics = true;
  bool collapse_whitespace = false;

  void validate() const {
    for (const auto& [key, value] : number_lexicon) {
      if (key.empty()) throw ConfigError("lexicon: empty key");
      for (char c : key)
        if (c < '0' || c > '9') throw ConfigError("lexicon: key '" + key + "' is not a digit string");
      for (char32_t cp : utf8::decode(value))
        if (digit_value(cp) >= 0) throw ConfigError("lexicon: value for '" + key + "' contains a digit");
    }
  }
};

/// Reads a tab-separated lexicon: "<digits>\t<written form>" per line. Blank
/// lines and lines starting with '#' are skipped.
inline std::map<std::string, std::string> read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon " + path.string());
  std::map<std::string, std::string> lex;
  std::string line;
  long n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected '<digits>\\t<text>'");
    std::string key = line.substr(0, tab);
    if (!lex.emplace(key, line.substr(tab + 1)).second)
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": duplicate key " + key);
  }
  return lex;
}

class UnknownNumberError : public InputError {
 public:
  explicit UnknownNumberError(const std::string& run)
      : InputError("number '" + run + "' has no lexicon entry"), run_(run) {}
  const std::string& run() const { return run_; }

 private:
  std::string run_;
};

/// Spells out digit runs with the longest lexicon key matching at each
/// position (pieces of one run are joined by a space), then drops strip_set
/// characters and, unless kept, diacritics.
inline std::string normalize_text(std::string_view raw, const NormalizationRules& rules,
                                  const GraphemeVocabulary& vocab = GraphemeVocabulary::darija()) {
  const std::u32string in = utf8::decode(raw);
  std::u32string spelled;
  std::size_t i = 0;
  while (i < in.size()) {
    if (digit_value(in[i]) < 0) {
      spelled.push_back(in[i++]);
      continue;
    }
    std::string run;
    while (i < in.size() && digit_value(in[i]) >= 0) run.push_back(static_cast<char>('0' + digit_value(in[i++])));
    std::size_t pos = 0;
    bool first = true;
    while (pos < run.size()) {
      std::size_t best = 0;
      const std::string* value = nullptr;
      for (std::size_t len = run.size() - pos; len > 0; --len) {
        auto it = rules.number_lexicon.find(run.substr(pos, len));
        if (it != rules.number_lexicon.end()) {
          best = len;
          value = &it->second;
          break;
        }
      }
      if (!value) throw UnknownNumberError(run);
      if (!first) spelled.push_back(U' ');
      spelled += utf8::decode(*value);
      pos += best;
      first = false;
    }
  }

  std::u32string out;
  out.reserve(spelled.size());
  for (char32_t cp : spelled) {
    if (rules.strip_set.count(cp)) continue;
    if (!rules.keep_diacritics && vocab.diacritics.count(cp)) continue;
    if (rules.collapse_whitespace && is_space(cp)) {
      if (!out.empty() && out.back() != U' ') out.push_back(U' ');
      continue;
    }
    out.push_back(cp);
  }
  if (rules.collapse_whitespace) {
    while (!out.empty() && out.back() == U' ') out.pop_back();
  }
  return utf8::encode(out);
}

}  // namespace foundtts
