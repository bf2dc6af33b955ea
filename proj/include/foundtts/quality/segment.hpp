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
#include <cstddef>
#include <vector>

#include "foundtts/dsp/waveform.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

struct SegmentSpec {
  double max_chunk_s = 10.0;
  double vad_frame_ms = 25.0;
  /// Frames quieter than (median voiced energy - this many dB) count as silence.
  double energy_threshold_db = 30.0;
  /// Unvoiced runs at least this long are eligible cut points.
  double min_silence_ms = 200.0;

  void validate() const {
    if (!(max_chunk_s > 0.0)) throw ConfigError("segment: max_chunk must be positive");
    if (!(vad_frame_ms > 0.0)) throw ConfigError("segment: vad_frame must be positive");
    if (min_silence_ms < 0.0 || min_silence_ms >= max_chunk_s * 1000.0)
      throw ConfigError("segment: need 0 <= min_silence < max_chunk");
    if (energy_threshold_db < 0.0) throw ConfigError("segment: energy threshold must be >= 0");
  }
};

struct Segment {
  std::size_t start = 0;  // first sample
  std::size_t end = 0;    // one past the last sample
  std::size_t length() const { return end - start; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Frames below this absolute level (dBFS) are never voiced.
inline constexpr double kAbsoluteSilenceDb = -80.0;

struct FrameEnergies {
  std::size_t frame_len = 1;
  std::vector<double> db;
  std::vector<bool> voiced;
};

inline FrameEnergies frame_energies(const Waveform& w, const SegmentSpec& spec) {
  FrameEnergies fe;
  fe.frame_len = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(spec.vad_frame_ms * w.sample_rate / 1000.0)));
  const std::size_t n = w.samples.size();
  for (std::size_t s = 0; s < n; s += fe.frame_len) {
    const std::size_t e = std::min(n, s + fe.frame_len);
    double acc = 0.0;
    for (std::size_t i = s; i < e; ++i) acc += w.samples[i] * w.samples[i];
    fe.db.push_back(10.0 * std::log10(acc / static_cast<double>(e - s) + 1e-20));
  }
  std::vector<double> loud;
  for (double d : fe.db)
    if (d > kAbsoluteSilenceDb) loud.push_back(d);
  fe.voiced.assign(fe.db.size(), false);
  if (loud.empty()) return fe;
  std::nth_element(loud.begin(), loud.begin() + loud.size() / 2, loud.end());
  const double threshold = std::max(kAbsoluteSilenceDb, loud[loud.size() / 2] - spec.energy_threshold_db);
  for (std::size_t f = 0; f < fe.db.size(); ++f) fe.voiced[f] = fe.db[f] > threshold;
  return fe;
}

/// Splits a recording into chunks of at most max_chunk seconds that together
/// cover every voiced frame. Cuts go inside silences of at least min_silence;
/// a span with no such silence is hard-cut at its quietest frame in the last
/// second before the limit. Consecutive voiced spans are packed into one chunk
/// while they fit.
inline std::vector<Segment> segment(const Waveform& w, const SegmentSpec& spec = {}) {
  spec.validate();
  if (w.sample_rate <= 0) throw ConfigError("segment: sample rate must be positive");
  std::vector<Segment> chunks;
  if (w.samples.empty()) return chunks;

  const auto fe = frame_energies(w, spec);
  const std::size_t n = w.samples.size();
  const std::size_t fl = fe.frame_len;
  const auto max_len = static_cast<std::size_t>(std::floor(spec.max_chunk_s * w.sample_rate));
  const auto min_silence = static_cast<std::size_t>(std::ceil(spec.min_silence_ms * w.sample_rate / 1000.0));
  const auto second = static_cast<std::size_t>(w.sample_rate);
  if (max_len == 0) throw ConfigError("segment: max_chunk shorter than one sample");

  // Voiced spans separated by long silences.
  std::vector<Segment> spans;
  std::size_t f = 0;
  const std::size_t frames = fe.db.size();
  while (f < frames) {
    while (f < frames && !fe.voiced[f]) ++f;
    if (f == frames) break;
    Segment span{f * fl, 0};
    std::size_t last_voiced = f;
    while (f < frames) {
      if (fe.voiced[f]) {
        last_voiced = f++;
        continue;
      }
      std::size_t g = f;
      while (g < frames && !fe.voiced[g]) ++g;
      const std::size_t gap = std::min(n, g * fl) - f * fl;
      if (g == frames || gap >= min_silence) break;
      f = g;
    }
    span.end = std::min(n, (last_voiced + 1) * fl);
    spans.push_back(span);
  }

  // Hard cuts inside over-long spans.
  std::vector<Segment> pieces;
  for (auto span : spans) {
    while (span.length() > max_len) {
      const std::size_t limit = span.start + max_len;
      const std::size_t search_from = limit > second ? std::max(span.start, limit - second) : span.start;
      std::size_t cut = limit;
      double quietest = INFINITY;
      for (std::size_t g = search_from / fl; g < frames; ++g) {
        const std::size_t mid = g * fl + fl / 2;
        if (g * fl < search_from || mid <= span.start) continue;
        if (mid > limit || (g + 1) * fl > limit) break;
        if (fe.db[g] < quietest) {
          quietest = fe.db[g];
          cut = mid;
        }
      }
      pieces.push_back({span.start, cut});
      span.start = cut;
    }
    pieces.push_back(span);
  }

  // Greedy packing of consecutive pieces.
  for (std::size_t i = 0; i < pieces.size();) {
    Segment chunk = pieces[i];
    std::size_t j = i + 1;
    while (j < pieces.size() && pieces[j].end - chunk.start <= max_len) chunk.end = pieces[j++].end;
    chunks.push_back(chunk);
    i = j;
  }

  // Move cut points into the silences, up to half of min_silence on each side.
  const std::size_t pad = min_silence / 2;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    auto& c = chunks[i];
    const std::size_t prev_end = i == 0 ? 0 : chunks[i - 1].end;
    const std::size_t next_start = i + 1 == chunks.size() ? n : chunks[i + 1].start;
    std::size_t left = std::min(pad, (c.start - prev_end) / 2);
    std::size_t right = std::min(pad, (next_start - c.end) / 2);
    left = std::min(left, max_len - c.length());
    right = std::min(right, max_len - c.length() - left);
    c.start -= left;
    c.end += right;
  }
  return chunks;
}

}  // namespace foundtts
