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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "foundtts/quality/gate.hpp"
#include "foundtts/quality/segment.hpp"

namespace foundtts {

/// Where the SNR gate sits relative to any external denoising step. The value
/// is recorded, not acted on.
enum class SnrStage { kRaw, kDenoised };

inline const char* stage_name(SnrStage s) { return s == SnrStage::kRaw ? "raw" : "denoised"; }

/// One line of the per-file audit log.
struct AuditRecord {
  std::string path;
  std::optional<int> sample_rate;
  std::optional<double> snr_db;
  bool snr_clamped = false;
  std::string decision;  // "accepted", "rejected" or "error"
  std::vector<std::string> reasons;
  std::vector<Segment> segments;
  std::string error;
  std::vector<std::string> warnings;
  SnrStage stage = SnrStage::kRaw;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["path"] = path;
    j["sample_rate"] = sample_rate ? nlohmann::json(*sample_rate) : nlohmann::json(nullptr);
    j["snr_db"] = snr_db ? nlohmann::json(*snr_db) : nlohmann::json(nullptr);
    j["snr_clamped"] = snr_clamped;
    j["snr_stage"] = stage_name(stage);
    j["decision"] = decision;
    j["reasons"] = reasons;
    auto segs = nlohmann::json::array();
    for (const auto& s : segments) segs.push_back({s.start, s.end});
    j["segments"] = segs;
    if (!error.empty()) j["error"] = error;
    if (!warnings.empty()) j["warnings"] = warnings;
    return j;
  }
};

inline AuditRecord audit_from(const std::string& path, const Waveform& w, const GateDecision& d,
                              const std::vector<Segment>& segs, SnrStage stage = SnrStage::kRaw) {
  AuditRecord r;
  r.path = path;
  r.sample_rate = w.sample_rate;
  if (d.snr) {
    r.snr_db = d.snr->value_db;
    r.snr_clamped = d.snr->clamped;
  }
  r.decision = d.accepted ? "accepted" : "rejected";
  for (auto reason : d.reasons) r.reasons.emplace_back(reason_id(reason));
  r.segments = segs;
  r.stage = stage;
  return r;
}

inline AuditRecord audit_error(const std::string& path, const std::string& message) {
  AuditRecord r;
  r.path = path;
  r.decision = "error";
  r.error = message;
  return r;
}

}  // namespace foundtts
