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
#include <span>
#include <vector>

#include "foundtts/dsp/matrix.hpp"
#include "foundtts/dsp/mel.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

struct MelCepstrum {
  Matrix<double> frames;  // [n_frames x n_coeffs], coefficients 1..n_coeffs
};

/// Orthonormal DCT-II of one vector.
inline std::vector<double> dct2(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
    c[k] = s * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }
  return c;
}

/// Cepstrum of log-mel frames: DCT-II per frame, c0 dropped, c1..c_n kept.
inline MelCepstrum cepstrum_from_log_mel(const Matrix<double>& log_mel, std::size_t n_coeffs = 13) {
  if (n_coeffs < 1) throw ConfigError("mel_cepstrum: n_coeffs must be >= 1");
  if (n_coeffs >= log_mel.cols())
    throw ConfigError("mel_cepstrum: n_coeffs must be below the mel band count " + std::to_string(log_mel.cols()));
  MelCepstrum out{Matrix<double>(log_mel.rows(), n_coeffs)};
  for (std::size_t t = 0; t < log_mel.rows(); ++t) {
    const auto c = dct2(log_mel.row(t));
    for (std::size_t k = 0; k < n_coeffs; ++k) out.frames(t, k) = c[k + 1];
  }
  return out;
}

inline MelCepstrum mel_cepstrum(const Waveform& w, const AnalysisConfig& cfg, std::size_t n_coeffs = 13) {
  return cepstrum_from_log_mel(mel_spectrogram(w, cfg).frames, n_coeffs);
}

}  // namespace foundtts
