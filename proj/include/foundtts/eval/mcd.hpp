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
#include <string>
#include <vector>

#include "foundtts/error.hpp"
#include "foundtts/eval/cepstrum.hpp"
#include "foundtts/eval/dtw.hpp"
#include "foundtts/eval/format.hpp"

namespace foundtts {

/// 10 / ln(10) * sqrt(2): dB scale factor applied to a Euclidean cepstral distance.
inline const double kMcdScale = 10.0 / std::numbers::ln10 * std::numbers::sqrt2;

enum class McdMode { kDtw, kStrict };

inline AlignmentPath dtw_align(const MelCepstrum& ref, const MelCepstrum& hyp) {
  return dtw_align(ref.frames, hyp.frames);
}

/// Mean per-frame mel cepstral distortion in dB over aligned frame pairs.
/// kStrict requires equal lengths and pairs frames one to one.
inline double mcd(const MelCepstrum& ref, const MelCepstrum& hyp, McdMode mode = McdMode::kDtw) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (mode == McdMode::kStrict) {
    if (ref.frames.cols() != hyp.frames.cols()) throw InputError("mcd: coefficient dimension mismatch");
    if (ref.frames.rows() != hyp.frames.rows())
      throw InputError("mcd: strict mode needs equal lengths (" + std::to_string(ref.frames.rows()) + " vs " +
                       std::to_string(hyp.frames.rows()) + ")");
    if (ref.frames.rows() == 0) throw InputError("mcd: empty sequence");
    for (std::size_t t = 0; t < ref.frames.rows(); ++t) pairs.emplace_back(t, t);
  } else {
    pairs = dtw_align(ref, hyp).pairs;
  }
  double s = 0.0;
  for (auto [i, j] : pairs) s += kMcdScale * frame_distance(ref.frames, i, hyp.frames, j);
  return s / static_cast<double>(pairs.size());
}

struct McdSummary {
  std::vector<double> values;  // one per utterance pair, input order
  MeanStd stats;
  std::string render(int precision = 2) const { return format_pm(stats.mean, stats.std, precision); }
};

inline McdSummary mcd_batch(const std::vector<MelCepstrum>& refs, const std::vector<MelCepstrum>& hyps,
                            McdMode mode = McdMode::kDtw) {
  if (refs.size() != hyps.size()) throw InputError("mcd: reference and hypothesis counts differ");
  McdSummary s;
  for (std::size_t i = 0; i < refs.size(); ++i) s.values.push_back(mcd(refs[i], hyps[i], mode));
  s.stats = mean_std(s.values);
  return s;
}

}  // namespace foundtts
