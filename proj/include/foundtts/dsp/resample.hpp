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
#include <numbers>
#include <vector>

#include "foundtts/dsp/waveform.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

/// Band-limited resampling by Hann-windowed sinc interpolation. When
/// downsampling the kernel is stretched so the cutoff sits at the new Nyquist.
/// Output length is round(N * target / source).
inline Waveform resample(const Waveform& w, int target_sr, int zero_crossings = 32) {
  if (target_sr <= 0) throw ConfigError("resample: target sample rate must be positive");
  require_valid(w, "resample");
  if (target_sr == w.sample_rate) return w;

  const double ratio = static_cast<double>(target_sr) / w.sample_rate;
  const double cutoff = std::min(1.0, ratio);  // relative to the source Nyquist
  const double half_width = zero_crossings / cutoff;  // in source samples
  const long n_in = static_cast<long>(w.samples.size());
  const auto n_out = static_cast<std::size_t>(std::llround(n_in * ratio));

  Waveform out{std::vector<double>(n_out, 0.0), target_sr};
  for (std::size_t i = 0; i < n_out; ++i) {
    const double t = static_cast<double>(i) / ratio;
    const long lo = std::max(0L, static_cast<long>(std::ceil(t - half_width)));
    const long hi = std::min(n_in - 1, static_cast<long>(std::floor(t + half_width)));
    double acc = 0.0;
    for (long k = lo; k <= hi; ++k) {
      const double x = t - static_cast<double>(k);
      const double arg = std::numbers::pi * cutoff * x;
      const double sinc = std::abs(arg) < 1e-12 ? 1.0 : std::sin(arg) / arg;
      const double taper = 0.5 + 0.5 * std::cos(std::numbers::pi * x / half_width);
      acc += w.samples[static_cast<std::size_t>(k)] * cutoff * sinc * taper;
    }
    out.samples[i] = acc;
  }
  return out;
}

}  // namespace foundtts
