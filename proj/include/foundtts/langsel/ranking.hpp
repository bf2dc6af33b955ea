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
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "foundtts/error.hpp"
#include "foundtts/langsel/distance.hpp"
#include "foundtts/langsel/projection.hpp"

namespace foundtts {

struct RankingRow {
  std::string language;
  double distance = 0.0;
  bool selected = false;
};

struct SimilarityRanking {
  std::string target;
  std::vector<RankingRow> rows;  // ascending distance, ties by label

  std::vector<std::string> selected() const {
    std::vector<std::string> out;
    for (const auto& r : rows)
      if (r.selected) out.push_back(r.language);
    return out;
  }
};

/// Strict ordering used for ranking rows: distance, then label.
inline bool ranks_before(const RankingRow& a, const RankingRow& b) {
  return a.distance != b.distance ? a.distance < b.distance : a.language < b.language;
}

inline SimilarityRanking rank_centroids(const std::string& target, const Vec& target_centroid,
                                        const std::map<std::string, Vec>& candidates, std::size_t k = 3) {
  if (k > candidates.size())
    throw ConfigError("k = " + std::to_string(k) + " exceeds the " + std::to_string(candidates.size()) +
                      " candidate languages");
  SimilarityRanking r{target, {}};
  for (const auto& [label, c] : candidates) {
    try {
      r.rows.push_back({label, cosine_distance(target_centroid, c), false});
    } catch (const InputError&) {
      throw InputError("centroid of '" + (norm(target_centroid) > 0.0 ? label : target) +
                       "' is the zero vector; cosine distance is undefined");
    }
  }
  std::sort(r.rows.begin(), r.rows.end(), ranks_before);
  for (std::size_t i = 0; i < k; ++i) r.rows[i].selected = true;
  return r;
}

/// Ranks candidate languages by cosine distance between projected centroids.
/// A candidate carrying the target's own label is skipped.
inline SimilarityRanking rank_sources(const ProjectionModel& m, const std::string& target,
                                      const std::vector<UtteranceEmbedding>& target_utts,
                                      const LanguageSet& candidates, std::size_t k = 3) {
  std::map<std::string, Vec> cents;
  for (const auto& [label, utts] : candidates.languages)
    if (label != target) cents[label] = language_centroid(m, utts);
  return rank_centroids(target, language_centroid(m, target_utts), cents, k);
}

inline std::string render_ranking_table(const SimilarityRanking& r) {
  std::size_t w = 8;
  for (const auto& row : r.rows) w = std::max(w, row.language.size());
  std::string out = "target: " + r.target + "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-4s  %-*s  %10s  %s\n", "rank", static_cast<int>(w), "language", "distance",
                "selected");
  out += buf;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-4zu  %-*s  %10.6f  %s\n", i + 1, static_cast<int>(w), r.rows[i].language.c_str(),
                  r.rows[i].distance, r.rows[i].selected ? "yes" : "");
    out += buf;
  }
  return out;
}

inline nlohmann::json ranking_json(const SimilarityRanking& r) {
  nlohmann::json j;
  j["target"] = r.target;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"language", row.language}, {"distance", row.distance}, {"selected", row.selected}});
  j["selected"] = r.selected();
  return j;
}

}  // namespace foundtts
