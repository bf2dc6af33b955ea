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
#include <cstddef>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "foundtts/text/utf8.hpp"
#include "foundtts/text/vocabulary.hpp"

namespace foundtts {

struct InventoryRow {
  std::string grapheme;
  char32_t code_point = 0;
  std::size_t count = 0;
  friend bool operator==(const InventoryRow&, const InventoryRow&) = default;
};

struct InventoryReport {
  std::vector<InventoryRow> rows;  // count descending, then code point ascending
  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& r : rows) t += r.count;
    return t;
  }
  std::size_t count_of(const std::string& g) const {
    for (const auto& r : rows)
      if (r.grapheme == g) return r.count;
    return 0;
  }
};

struct InventoryOptions {
  bool include_diacritics = false;
};

inline std::map<char32_t, std::size_t> grapheme_counts(const std::vector<std::string>& corpus,
                                                       const GraphemeVocabulary& vocab,
                                                       const InventoryOptions& opt = {}) {
  std::map<char32_t, std::size_t> counts;
  for (std::size_t line = 0; line < corpus.size(); ++line) {
    std::vector<std::string> tokens;
    try {
      tokens = grapheme_tokenize(corpus[line], vocab);
    } catch (const OovError& e) {
      throw OovError(e.code_points(), static_cast<long>(line + 1));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line + 1) + ": " + e.what());
    }
    for (const auto& t : tokens) {
      const char32_t cp = utf8::decode(t)[0];
      if (!opt.include_diacritics && vocab.kind(cp) == GraphemeKind::kDiacritic) continue;
      ++counts[cp];
    }
  }
  return counts;
}

/// Grapheme frequency table over a corpus, one utterance per entry.
inline InventoryReport grapheme_inventory(const std::vector<std::string>& corpus,
                                          const GraphemeVocabulary& vocab,
                                          const InventoryOptions& opt = {}) {
  InventoryReport rep;
  for (const auto& [cp, n] : grapheme_counts(corpus, vocab, opt)) rep.rows.push_back({utf8::encode(cp), cp, n});
  std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const InventoryRow& a, const InventoryRow& b) {
    return a.count != b.count ? a.count > b.count : a.code_point < b.code_point;
  });
  return rep;
}

/// Aligned text table laid out in `columns` (token, count) pairs per line,
/// filled column by column.
inline std::string render_inventory_table(const InventoryReport& rep, std::size_t columns = 3) {
  columns = std::max<std::size_t>(columns, 1);
  const std::size_t n = rep.rows.size();
  const std::size_t height = (n + columns - 1) / columns;
  std::size_t width = 5;
  for (const auto& r : rep.rows) width = std::max(width, std::to_string(r.count).size());
  std::ostringstream os;
  for (std::size_t c = 0; c < columns && c < std::max<std::size_t>(n, 1); ++c)
    os << (c ? "  " : "") << "token  " << std::setw(static_cast<int>(width)) << "count";
  os << '\n';
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < columns; ++c) {
      const std::size_t k = c * height + r;
      if (k >= n) break;
      // Each grapheme occupies one display cell; pad manually since setw counts bytes.
      os << (c ? "  " : "") << rep.rows[k].grapheme << "      " << std::setw(static_cast<int>(width))
         << rep.rows[k].count;
    }
    os << '\n';
  }
  return os.str();
}

inline std::string render_inventory_csv(const InventoryReport& rep) {
  std::string out = "token,code_point,count\n";
  for (const auto& r : rep.rows)
    out += r.grapheme + "," + utf8::code_point_label(r.code_point) + "," + std::to_string(r.count) + "\n";
  return out;
}

struct CoverageReport {
  std::vector<std::string> missing;                        // required but never seen
  std::vector<std::pair<std::string, std::size_t>> rare;   // seen fewer than the threshold
};

/// Checks that every required grapheme occurs, and flags every observed
/// grapheme seen fewer than `rare_below` times.
inline CoverageReport coverage_check(const std::vector<std::string>& corpus, const std::set<char32_t>& required,
                                     const GraphemeVocabulary& vocab, std::size_t rare_below = 5) {
  InventoryOptions opt;
  opt.include_diacritics = std::any_of(required.begin(), required.end(),
                                       [&](char32_t c) { return vocab.kind(c) == GraphemeKind::kDiacritic; });
  const auto counts = grapheme_counts(corpus, vocab, opt);
  CoverageReport rep;
  for (char32_t cp : required)
    if (!counts.count(cp)) rep.missing.push_back(utf8::encode(cp));
  for (const auto& [cp, n] : counts)
    if (n < rare_below) rep.rare.emplace_back(utf8::encode(cp), n);
  return rep;
}

}  // namespace foundtts
