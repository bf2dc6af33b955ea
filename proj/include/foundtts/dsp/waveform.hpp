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

#include <cmath>
#include <string>
#include <vector>

#include "foundtts/error.hpp"

namespace foundtts {

/// Mono audio: amplitudes nominally in [-1, 1] at an integer sample rate.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 22050;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
  bool all_zero() const {
    for (double s : samples)
      if (s != 0.0) return false;
    return true;
  }
};

/// Throws InputError unless the waveform is non-empty and finite.
inline void require_valid(const Waveform& w, const char* op) {
  if (w.sample_rate <= 0)
    throw ConfigError(std::string(op) + ": sample rate must be positive");
  if (w.samples.empty()) throw InputError(std::string(op) + ": empty waveform");
  for (double s : w.samples)
    if (!std::isfinite(s)) throw InputError(std::string(op) + ": non-finite sample");
}

}  // namespace foundtts
