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

#include <cstdio>
#include <map>
#include <set>
#include <string>

#include "foundtts/corpus/manifest.hpp"

namespace foundtts {

struct LanguageStats {
  double seconds = 0.0;
  std::size_t utterances = 0;
  std::set<std::string> speakers;
  double minutes() const { return seconds / 60.0; }
  friend bool operator==(const LanguageStats&, const LanguageStats&) = default;
};

struct CorpusStats {
  std::map<std::string, LanguageStats> languages;
  LanguageStats total;

  /// Merges another report: durations and counts add, speaker sets unite.
  CorpusStats& operator+=(const CorpusStats& o) {
    auto merge = [](LanguageStats& a, const LanguageStats& b) {
      a.seconds += b.seconds;
      a.utterances += b.utterances;
      a.speakers.insert(b.speakers.begin(), b.speakers.end());
    };
    for (const auto& [l, s] : o.languages) merge(languages[l], s);
    merge(total, o.total);
    return *this;
  }
};

inline CorpusStats corpus_stats(const Manifest& m) {
  CorpusStats st;
  for (const auto& r : m.records) {
    for (LanguageStats* s : {&st.languages[r.language], &st.total}) {
      s->seconds += r.duration_s;
      s->utterances += 1;
      if (!r.speaker.empty()) s->speakers.insert(r.speaker);
    }
  }
  return st;
}

/// "Darija | 76.36 | 464 | 1" per language plus a total row.
inline std::string render_stats_table(const CorpusStats& st) {
  std::string out = "language | minutes | utterances | speakers\n";
  char buf[256];
  auto row = [&](const std::string& label, const LanguageStats& s) {
    std::snprintf(buf, sizeof buf, "%s | %.2f | %zu | %zu\n", label.c_str(), s.minutes(), s.utterances,
                  s.speakers.size());
    out += buf;
  };
  for (const auto& [l, s] : st.languages) row(l.empty() ? "(none)" : l, s);
  row("total", st.total);
  return out;
}

inline std::string render_stats_csv(const CorpusStats& st) {
  std::string out = "language,minutes,utterances,speakers\n";
  char buf[256];
  auto row = [&](const std::string& label, const LanguageStats& s) {
    std::snprintf(buf, sizeof buf, "%s,%.4f,%zu,%zu\n", label.c_str(), s.minutes(), s.utterances, s.speakers.size());
    out += buf;
  };
  for (const auto& [l, s] : st.languages) row(l, s);
  row("total", st.total);
  return out;
}

}  // namespace foundtts
