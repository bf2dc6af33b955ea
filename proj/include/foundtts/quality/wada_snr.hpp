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
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "foundtts/dsp/waveform.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

struct SnrEstimate {
  double value_db = 0.0;
  bool clamped = false;
};

namespace wada {

inline constexpr const char* kTableVersion = "wada-gamma0.4-quad-v1";
inline constexpr double kMinDb = -20.0;
inline constexpr double kMaxDb = 100.0;
inline constexpr std::size_t kMinSamples = 4096;
inline constexpr double kFloor = 1e-10;

// Expected beta = ln E|x| - E ln|x| for x = s + n, with |s| ~ Gamma(0.4) under a
// random sign and n Gaussian, at SNR = -20, -19, ..., 100 dB. Computed by
// quadrature with tools/gen_wada_table.py.
inline constexpr std::array<double, 121> kBetaTable = {
    0.40943470, 0.40945950, 0.40949762, 0.40955585, 0.40964412, 0.40977680,
    0.40997422, 0.41026473, 0.41068699, 0.41129251, 0.41214827, 0.41333908,
    0.41496934, 0.41716371, 0.42006640, 0.42383855, 0.42865366, 0.43469104,
    0.44212759, 0.45112851, 0.46183767, 0.47436858, 0.48879694, 0.50515527,
    0.52343039, 0.54356375, 0.56545442, 0.58896451, 0.61392608, 0.64014914,
    0.66742978, 0.69555802, 0.72432478, 0.75352777, 0.78297605, 0.81249344,
    0.84192058, 0.87111614, 0.89995704, 0.92833810, 0.95617116, 0.98338391,
    1.00991846, 1.03572994, 1.06078494, 1.08506011, 1.10854078, 1.13121969,
    1.15309585, 1.17417352, 1.19446129, 1.21397127, 1.23271845, 1.25072002,
    1.26799494, 1.28456345, 1.30044672, 1.31566656, 1.33024513, 1.34420473,
    1.35756766, 1.37035603, 1.38259167, 1.39429603, 1.40549012, 1.41619442,
    1.42642887, 1.43621283, 1.44556507, 1.45450370, 1.46304627, 1.47120965,
    1.47901012, 1.48646333, 1.49358436, 1.50038765, 1.50688710, 1.51309603,
    1.51902721, 1.52469289, 1.53010481, 1.53527420, 1.54021182, 1.54492796,
    1.54943249, 1.55373483, 1.55784400, 1.56176863, 1.56551695, 1.56909686,
    1.57251589, 1.57578125, 1.57889982, 1.58187818, 1.58472262, 1.58743915,
    1.59003351, 1.59251118, 1.59487740, 1.59713719, 1.59929531, 1.60135635,
    1.60332466, 1.60520441, 1.60699958, 1.60871398, 1.61035124, 1.61191482,
    1.61340805, 1.61483407, 1.61619593, 1.61749650, 1.61873855, 1.61992470,
    1.62105746, 1.62213925, 1.62317236, 1.62415897, 1.62510117, 1.62600098,
    1.62686029
};

/// Throws unless the table is strictly increasing; interpolation relies on it.
inline void validate_table() {
  for (std::size_t i = 1; i < kBetaTable.size(); ++i)
    if (!(kBetaTable[i] > kBetaTable[i - 1]))
      throw std::logic_error(std::string("WADA table ") + kTableVersion +
                             " is not monotone at index " + std::to_string(i));
}

}  // namespace wada

/// Scale-invariant amplitude statistic beta = ln(mean|x|) - mean(ln max(|x|, 1e-10)).
inline double wada_beta(const std::vector<double>& x) {
  double abs_sum = 0.0, log_sum = 0.0;
  for (double v : x) {
    const double a = std::abs(v);
    abs_sum += a;
    log_sum += std::log(std::max(a, wada::kFloor));
  }
  const double n = static_cast<double>(x.size());
  return std::log(std::max(abs_sum / n, wada::kFloor)) - log_sum / n;
}

/// WADA-SNR: beta mapped to dB through the Gamma(0.4)+Gaussian lookup table
/// with linear interpolation, clamped to [-20, 100] dB.
inline SnrEstimate wada_snr(const Waveform& w) {
  static const bool table_ok = (wada::validate_table(), true);
  (void)table_ok;
  require_valid(w, "wada_snr");
  if (w.samples.size() < wada::kMinSamples)
    throw InputError("wada_snr: need at least " + std::to_string(wada::kMinSamples) + " samples, got " +
                     std::to_string(w.samples.size()));
  if (w.all_zero()) throw InputError("wada_snr: all-zero waveform");

  const double beta = wada_beta(w.samples);
  const auto& t = wada::kBetaTable;
  if (beta <= t.front()) return {wada::kMinDb, true};
  if (beta >= t.back()) return {wada::kMaxDb, true};
  const auto hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), beta) - t.begin());
  const std::size_t lo = hi - 1;
  const double frac = (beta - t[lo]) / (t[hi] - t[lo]);
  return {wada::kMinDb + static_cast<double>(lo) + frac, false};
}

}  // namespace foundtts
