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

#include "foundtts/dsp/waveform.hpp"
#include "foundtts/quality/wada_snr.hpp"

namespace foundtts {

enum class GateReason { kSnrBelowThreshold, kSampleRateBelowMinimum };

inline const char* reason_id(GateReason r) {
  switch (r) {
    case GateReason::kSnrBelowThreshold: return "snr_below_threshold";
    case GateReason::kSampleRateBelowMinimum: return "sample_rate_below_minimum";
  }
  return "?";
}

struct GateConfig {
  double snr_threshold_db = 20.0;
  int min_sample_rate = 22050;
};

struct GateDecision {
  bool accepted = false;
  std::vector<GateReason> reasons;
  std::optional<SnrEstimate> snr;
};

/// Admission rule for found audio: reject when WADA-SNR is under the threshold
/// or the sample rate is under the minimum. Both rules are always evaluated
/// so the decision lists every violation.
inline GateDecision gate_audio(const Waveform& w, const GateConfig& cfg = {}) {
  GateDecision d;
  d.snr = wada_snr(w);
  if (d.snr->value_db < cfg.snr_threshold_db) d.reasons.push_back(GateReason::kSnrBelowThreshold);
  if (w.sample_rate < cfg.min_sample_rate) d.reasons.push_back(GateReason::kSampleRateBelowMinimum);
  d.accepted = d.reasons.empty();
  return d;
}

}  // namespace foundtts
