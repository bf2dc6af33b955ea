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
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "foundtts/dsp/fft.hpp"
#include "foundtts/dsp/matrix.hpp"
#include "foundtts/dsp/waveform.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

enum class WindowType { kHann, kHamming, kRectangular };

inline const char* window_name(WindowType w) {
  switch (w) {
    case WindowType::kHann: return "hann";
    case WindowType::kHamming: return "hamming";
    case WindowType::kRectangular: return "rectangular";
  }
  return "?";
}

inline WindowType parse_window(const std::string& name) {
  if (name == "hann") return WindowType::kHann;
  if (name == "hamming") return WindowType::kHamming;
  if (name == "rectangular" || name == "boxcar") return WindowType::kRectangular;
  throw ConfigError("unknown window '" + name + "'");
}

/// Speech analysis parameters. Defaults: 22.05 kHz, 1024-point FFT, 256-sample
/// hop, 80 mel bands over [0, sr/2].
struct AnalysisConfig {
  int n_fft = 1024;
  int hop = 256;
  int n_mels = 80;
  WindowType window = WindowType::kHann;
  double fmin = 0.0;
  std::optional<double> fmax;  // unset means sample_rate / 2
  int sample_rate = 22050;

  int n_bins() const { return n_fft / 2 + 1; }
  double effective_fmax() const { return fmax.value_or(sample_rate / 2.0); }

  void validate() const {
    if (sample_rate <= 0) throw ConfigError("analysis: sample_rate must be positive");
    if (n_fft <= 0) throw ConfigError("analysis: n_fft must be positive");
    if (hop <= 0 || hop > n_fft) throw ConfigError("analysis: need 0 < hop <= n_fft");
    if (n_mels < 1) throw ConfigError("analysis: n_mels must be >= 1");
    const double hi = effective_fmax();
    if (fmin < 0.0 || fmin >= hi) throw ConfigError("analysis: need 0 <= fmin < fmax");
    if (hi > sample_rate / 2.0) throw ConfigError("analysis: fmax above Nyquist");
  }

  std::string canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "n_fft=" << n_fft << ";hop=" << hop << ";n_mels=" << n_mels
       << ";window=" << window_name(window) << ";fmin=" << fmin << ";fmax=" << effective_fmax()
       << ";sr=" << sample_rate;
    return os.str();
  }

  /// FNV-1a over the canonical form; stored in spectrogram container headers.
  std::uint64_t digest() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// Periodic window of length n (the DFT-even form used for STFT analysis).
inline std::vector<double> make_window(WindowType type, int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  const double step = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    switch (type) {
      case WindowType::kHann: w[i] = 0.5 - 0.5 * std::cos(step * i); break;
      case WindowType::kHamming: w[i] = 0.54 - 0.46 * std::cos(step * i); break;
      case WindowType::kRectangular: break;
    }
  }
  return w;
}

/// 1 + floor(N / hop): frame count under centered padding.
inline std::size_t frame_count(std::size_t num_samples, int hop) {
  return 1 + num_samples / static_cast<std::size_t>(hop);
}

struct ComplexSpectrogram {
  Matrix<Complex> frames;  // [n_frames x n_bins]
  AnalysisConfig config;
  std::size_t num_samples = 0;
};

struct MagnitudeSpectrogram {
  Matrix<double> frames;  // [n_frames x n_bins], non-negative
  AnalysisConfig config;
  std::size_t num_samples = 0;
};

namespace detail {

// Index into the original signal for position p of the reflect-padded signal.
// Reflection excludes the edge sample and repeats for pads longer than the signal.
inline std::size_t reflect_index(long p, std::size_t n) {
  if (n == 1) return 0;
  const long period = 2 * static_cast<long>(n - 1);
  long m = p % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m < static_cast<long>(n) ? m : period - m);
}

}  // namespace detail

/// Complex STFT with centered reflect padding of n_fft/2 on both sides.
inline ComplexSpectrogram analyze(const Waveform& w, const AnalysisConfig& cfg) {
  cfg.validate();
  if (w.sample_rate != cfg.sample_rate)
    throw ConfigError("stft: waveform sample rate " + std::to_string(w.sample_rate) +
                      " does not match analysis sample rate " + std::to_string(cfg.sample_rate));
  require_valid(w, "stft");

  const std::size_t n = w.samples.size();
  const std::size_t n_fft = static_cast<std::size_t>(cfg.n_fft);
  const long pad = cfg.n_fft / 2;
  const std::size_t frames = frame_count(n, cfg.hop);
  const auto window = make_window(cfg.window, cfg.n_fft);
  const FftPlan plan(n_fft);

  ComplexSpectrogram out{Matrix<Complex>(frames, cfg.n_bins()), cfg, n};
  std::vector<double> buf(n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    const long start = static_cast<long>(t) * cfg.hop - pad;
    for (std::size_t j = 0; j < n_fft; ++j)
      buf[j] = w.samples[detail::reflect_index(start + static_cast<long>(j), n)] * window[j];
    const auto spec = plan.rfft(buf);
    std::copy(spec.begin(), spec.end(), out.frames.row(t).begin());
  }
  return out;
}

inline MagnitudeSpectrogram magnitude(const ComplexSpectrogram& s) {
  MagnitudeSpectrogram m{Matrix<double>(s.frames.rows(), s.frames.cols()), s.config, s.num_samples};
  for (std::size_t i = 0; i < s.frames.data().size(); ++i) m.frames.data()[i] = std::abs(s.frames.data()[i]);
  return m;
}

/// Magnitude STFT. Frame count is 1 + floor(N / hop).
inline MagnitudeSpectrogram stft(const Waveform& w, const AnalysisConfig& cfg) {
  return magnitude(analyze(w, cfg));
}

/// Least-squares inverse STFT of a padded, windowed analysis. Overlap-added
/// contributions from the reflected padding are folded back onto the samples
/// they mirror, so this is the exact least-squares signal estimate for the
/// `analyze` operator (and reproduces the input for consistent spectrograms).
inline Waveform synthesize(const ComplexSpectrogram& s) {
  const auto& cfg = s.config;
  cfg.validate();
  const std::size_t n = s.num_samples;
  if (n == 0) throw InputError("istft: spectrogram carries no signal length");
  if (s.frames.cols() != static_cast<std::size_t>(cfg.n_bins()))
    throw InputError("istft: bin count does not match n_fft");

  const std::size_t n_fft = static_cast<std::size_t>(cfg.n_fft);
  const long pad = cfg.n_fft / 2;
  const auto window = make_window(cfg.window, cfg.n_fft);
  const FftPlan plan(n_fft);

  std::vector<double> num(n, 0.0), den(n, 0.0);
  for (std::size_t t = 0; t < s.frames.rows(); ++t) {
    const auto frame = plan.irfft(s.frames.row(t));
    const long start = static_cast<long>(t) * cfg.hop - pad;
    for (std::size_t j = 0; j < n_fft; ++j) {
      const std::size_t i = detail::reflect_index(start + static_cast<long>(j), n);
      num[i] += window[j] * frame[j];
      den[i] += window[j] * window[j];
    }
  }
  Waveform out{std::vector<double>(n, 0.0), cfg.sample_rate};
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = den[i] > 1e-12 ? num[i] / den[i] : 0.0;
  return out;
}

}  // namespace foundtts
