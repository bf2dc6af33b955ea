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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "foundtts/csv.hpp"
#include "foundtts/error.hpp"
#include "foundtts/eval/format.hpp"

namespace foundtts {

struct Rating {
  std::string rater;
  std::string sample;
  std::string model;
  std::string criterion;
  int score = 0;
};

struct MosRow {
  std::string model;
  std::string criterion;
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;   // sample standard deviation
  double ci95 = 0.0;  // half-width of the normal-approximation 95% interval
};

struct MosSummary {
  std::vector<MosRow> rows;  // sorted by model, then criterion

  const MosRow* find(const std::string& model, const std::string& criterion) const {
    for (const auto& r : rows)
      if (r.model == model && r.criterion == criterion) return &r;
    return nullptr;
  }
};

inline MosSummary mos_aggregate(const std::vector<Rating>& ratings) {
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    const auto& r = ratings[i];
    if (r.score < 1 || r.score > 5)
      throw InputError("rating " + std::to_string(i + 1) + " (rater " + r.rater + ", sample " + r.sample +
                       "): score " + std::to_string(r.score) + " outside 1..5");
    groups[{r.model, r.criterion}].push_back(r.score);
  }
  MosSummary s;
  for (auto& [key, scores] : groups) {
    // Sorting fixes the summation order, so the result does not depend on record order.
    std::sort(scores.begin(), scores.end());
    const auto ms = mean_std(scores);
    s.rows.push_back({key.first, key.second, ms.n, ms.mean, ms.std,
                      1.96 * ms.std / std::sqrt(static_cast<double>(ms.n))});
  }
  return s;
}

/// Parses a ratings CSV with header rater,sample,model,criterion,score (any
/// column order).
inline std::vector<Rating> parse_ratings(std::istream& in, const std::string& source = "ratings") {
  std::string line;
  if (!std::getline(in, line)) throw InputError(source + ": empty ratings file");
  const auto header = csv::split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"rater", "sample", "model", "criterion", "score"})
    if (!col.count(name)) throw InputError(source + ": missing column '" + name + "'");
  std::vector<Rating> out;
  long n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != header.size())
      throw InputError(source + ":" + std::to_string(n) + ": expected " + std::to_string(header.size()) + " fields");
    Rating r{f[col["rater"]], f[col["sample"]], f[col["model"]], f[col["criterion"]], 0};
    const auto& s = f[col["score"]];
    if (s.size() != 1 || s[0] < '1' || s[0] > '5')
      throw InputError(source + ":" + std::to_string(n) + ": score '" + s + "' is not an integer in 1..5");
    r.score = s[0] - '0';
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<Rating> read_ratings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_ratings(in, path.string());
}

/// One line per model, one "mean ± dispersion" column per criterion.
inline std::string render_mos_table(const MosSummary& s, bool use_ci = false) {
  std::set<std::string> criteria;
  std::vector<std::string> models;
  for (const auto& r : s.rows) {
    criteria.insert(r.criterion);
    if (models.empty() || models.back() != r.model) models.push_back(r.model);
  }
  std::size_t mw = 5;
  for (const auto& m : models) mw = std::max(mw, m.size());
  auto pad = [](std::string v, std::size_t w) {
    if (v.size() < w) v.append(w - v.size(), ' ');
    return v;
  };
  // "3.72 ± 0.47" is 12 bytes but 11 columns wide; pad on display width.
  const std::size_t cw = 14;
  std::string out = pad("model", mw);
  for (const auto& c : criteria) out += " | " + pad(c, cw);
  out += '\n';
  for (const auto& m : models) {
    out += pad(m, mw);
    for (const auto& c : criteria) {
      const MosRow* r = s.find(m, c);
      std::string cell = r ? format_pm(r->mean, use_ci ? r->ci95 : r->std) : "-";
      const std::size_t display = cell.size() - (r ? 1 : 0);
      if (display < cw) cell.append(cw - display, ' ');
      out += " | " + cell;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

inline std::string render_mos_csv(const MosSummary& s) {
  std::string out = "model,criterion,n,mean,std,ci95\n";
  char buf[128];
  for (const auto& r : s.rows) {
    std::snprintf(buf, sizeof buf, ",%zu,%.4f,%.4f,%.4f\n", r.n, r.mean, r.std, r.ci95);
    out += csv::escape(r.model) + "," + csv::escape(r.criterion) + buf;
  }
  return out;
}

}  // namespace foundtts
