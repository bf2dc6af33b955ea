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
#include <string>
#include <vector>

#include "foundtts/dsp/matrix.hpp"
#include "foundtts/dsp/stft.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

/// HTK mel scale: m(f) = 2595 log10(1 + f / 700).
inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

inline constexpr double kLogMelFloor = 1e-10;

struct MelFilterbank {
  Matrix<double> weights;          // [n_mels x n_bins]
  std::vector<double> center_hz;   // peak frequency of each triangle
  std::string scale = "htk";
};

struct MelSpectrogram {
  Matrix<double> frames;  // [n_frames x n_mels], natural-log compressed
  AnalysisConfig config;
};

/// Triangular filters with centers equally spaced in mel between fmin and
/// fmax; each row is scaled so its largest weight is exactly 1.
inline MelFilterbank mel_filterbank(const AnalysisConfig& cfg) {
  cfg.validate();
  const int n_mels = cfg.n_mels;
  const int n_bins = cfg.n_bins();
  const double bin_hz = static_cast<double>(cfg.sample_rate) / cfg.n_fft;
  const double mel_lo = hz_to_mel(cfg.fmin);
  const double mel_hi = hz_to_mel(cfg.effective_fmax());

  std::vector<double> edges(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i)
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));

  for (int i = 1; i < n_mels + 1; ++i) {
    const long a = std::lround(edges[i] / bin_hz);
    const long b = std::lround(edges[i + 1] / bin_hz);
    if (i < n_mels && a == b)
      throw ConfigError("mel_filterbank: " + std::to_string(n_mels) +
                        " mel bands are too many for n_fft=" + std::to_string(cfg.n_fft) +
                        " (bands " + std::to_string(i - 1) + " and " + std::to_string(i) +
                        " share FFT bin " + std::to_string(a) + ")");
  }

  MelFilterbank fb{Matrix<double>(n_mels, n_bins), {}, "htk"};
  fb.center_hz.assign(edges.begin() + 1, edges.end() - 1);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    double peak = 0.0;
    for (int k = 0; k < n_bins; ++k) {
      const double f = k * bin_hz;
      const double rise = (f - lo) / (mid - lo);
      const double fall = (hi - f) / (hi - mid);
      const double v = std::max(0.0, std::min(rise, fall));
      fb.weights(m, k) = v;
      peak = std::max(peak, v);
    }
    if (peak <= 0.0)
      throw ConfigError("mel_filterbank: band " + std::to_string(m) +
                        " covers no FFT bin; reduce n_mels or raise n_fft");
    for (int k = 0; k < n_bins; ++k) fb.weights(m, k) /= peak;
  }
  return fb;
}

/// Applies the filterbank to a magnitude spectrogram and takes log(max(eps, .)).
inline MelSpectrogram apply_mel(const MagnitudeSpectrogram& mag, const MelFilterbank& fb) {
  const std::size_t bands = fb.weights.rows();
  if (mag.frames.cols() != fb.weights.cols())
    throw InputError("apply_mel: filterbank bin count does not match spectrogram");
  MelSpectrogram out{Matrix<double>(mag.frames.rows(), bands), mag.config};
  for (std::size_t t = 0; t < mag.frames.rows(); ++t) {
    const auto frame = mag.frames.row(t);
    for (std::size_t m = 0; m < bands; ++m) {
      const auto w = fb.weights.row(m);
      double acc = 0.0;
      for (std::size_t k = 0; k < frame.size(); ++k) acc += w[k] * frame[k];
      out.frames(t, m) = std::log(std::max(kLogMelFloor, acc));
    }
  }
  return out;
}

inline MelSpectrogram mel_spectrogram(const Waveform& w, const AnalysisConfig& cfg) {
  return apply_mel(stft(w, cfg), mel_filterbank(cfg));
}

}  // namespace foundtts
