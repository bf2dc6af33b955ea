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
#include <string>
#include <utility>
#include <vector>

#include "foundtts/corpus/manifest.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

class ShortfallError : public DataError {
 public:
  ShortfallError(const std::string& language, double available_min, double share_min)
      : DataError(describe(language, available_min, share_min)), language_(language) {}
  const std::string& language() const { return language_; }

 private:
  static std::string describe(const std::string& l, double avail, double share) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "language '%s' has %.2f min available, below its share of %.2f min", l.c_str(),
                  avail, share);
    return buf;
  }
  std::string language_;
};

struct LanguageShare {
  std::string language;
  double share_min = 0.0;
  double available_min = 0.0;
  double selected_min = 0.0;
  std::vector<UtteranceRecord> selected;
};

struct PoolingPlan {
  double total_budget_min = 0.0;
  std::vector<LanguageShare> languages;  // input order

  double selected_min() const {
    double s = 0.0;
    for (const auto& l : languages) s += l.selected_min;
    return s;
  }
  Manifest pooled() const {
    Manifest m;
    for (const auto& l : languages) m.records.insert(m.records.end(), l.selected.begin(), l.selected.end());
    return m;
  }
};

/// Per-language shares. Without redistribution each language gets budget / n
/// and any language short of it is an error. With redistribution the budget
/// is water-filled: short languages contribute everything they have and the
/// remainder is split equally among the rest.
inline std::vector<double> pool_shares(const std::vector<double>& available_min, double budget_min,
                                       bool redistribute) {
  const std::size_t n = available_min.size();
  std::vector<double> share(n, budget_min / static_cast<double>(n));
  if (!redistribute) return share;
  std::vector<bool> capped(n, false);
  double remaining = budget_min;
  std::size_t open = n;
  for (bool changed = true; changed && open > 0;) {
    changed = false;
    const double equal = remaining / static_cast<double>(open);
    for (std::size_t i = 0; i < n; ++i) {
      if (!capped[i] && available_min[i] < equal) {
        capped[i] = true;
        share[i] = available_min[i];
        remaining -= available_min[i];
        --open;
        changed = true;
      }
    }
  }
  const double equal = open ? remaining / static_cast<double>(open) : 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (!capped[i]) share[i] = equal;
  return share;
}

inline PoolingPlan pool_languages(const std::vector<std::pair<std::string, Manifest>>& manifests, double budget_min,
                                  bool redistribute = false) {
  if (manifests.empty()) throw ConfigError("pooling needs at least one language");
  if (!(budget_min > 0.0)) throw ConfigError("pooling budget must be positive");
  std::vector<double> avail;
  for (const auto& [_, m] : manifests) avail.push_back(m.total_seconds() / 60.0);
  const auto shares = pool_shares(avail, budget_min, redistribute);

  constexpr double kTol = 1e-9;
  if (redistribute) {
    double total = 0.0;
    for (double a : avail) total += a;
    if (total + kTol < budget_min) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "pooled languages hold %.2f min in total, below the %.2f min budget", total,
                    budget_min);
      throw DataError(buf);
    }
  }
  PoolingPlan plan{budget_min, {}};
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    const auto& [label, m] = manifests[i];
    if (avail[i] + kTol < shares[i]) throw ShortfallError(label, avail[i], shares[i]);
    LanguageShare ls{label, shares[i], avail[i], 0.0, {}};
    double acc_s = 0.0;
    const double target_s = shares[i] * 60.0;
    for (const auto& r : m.records) {
      if (acc_s >= target_s - kTol) break;
      ls.selected.push_back(r);
      acc_s += r.duration_s;
    }
    ls.selected_min = acc_s / 60.0;
    plan.languages.push_back(std::move(ls));
  }
  return plan;
}

inline std::string render_pooling_plan(const PoolingPlan& p) {
  std::string out = "language | share_min | available_min | selected_min | utterances\n";
  char buf[256];
  for (const auto& l : p.languages) {
    std::snprintf(buf, sizeof buf, "%s | %.2f | %.2f | %.2f | %zu\n", l.language.c_str(), l.share_min,
                  l.available_min, l.selected_min, l.selected.size());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "total | %.2f | | %.2f |\n", p.total_budget_min, p.selected_min());
  out += buf;
  return out;
}

}  // namespace foundtts
