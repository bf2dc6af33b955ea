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
#include <numbers>
#include <vector>

#include "foundtts/dsp/stft.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

/// Spectral convergence ||A - B||_F / ||B||_F between two one-sided magnitude
/// spectrograms, measured over the full two-sided spectrum (interior bins count
/// twice). Returns 0 when both are all-zero.
inline double spectral_convergence(const Matrix<double>& estimate, const Matrix<double>& target) {
  if (estimate.rows() != target.rows() || estimate.cols() != target.cols())
    throw InputError("spectral_convergence: shape mismatch");
  const std::size_t bins = target.cols();
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < target.rows(); ++t) {
    for (std::size_t k = 0; k < bins; ++k) {
      // DC and, for even n_fft, Nyquist appear once in the two-sided spectrum.
      const double weight = (k == 0 || k == bins - 1) ? 1.0 : 2.0;
      const double d = estimate(t, k) - target(t, k);
      num += weight * d * d;
      den += weight * target(t, k) * target(t, k);
    }
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

enum class PhaseInit {
  kZero,
  /// Phase-locked vocoder estimate: spectral peaks are tracked across frames,
  /// their phase advanced by the interpolated peak frequency, and neighbouring
  /// bins locked to the peak with the centered-window phase offset. The
  /// iterations that follow are unchanged; only the starting point differs.
  kPhaseLocked,
};

namespace detail {

// Magnitude of the DFT of a length-N cosine-sum window
// a0 - a1 cos(2 pi n / N) at a fractional bin offset x, built from Dirichlet kernels.
class WindowKernel {
 public:
  WindowKernel(WindowType type, int n) : n_(n) {
    switch (type) {
      case WindowType::kHann: a0_ = 0.5; a1_ = 0.5; break;
      case WindowType::kHamming: a0_ = 0.54; a1_ = 0.46; break;
      case WindowType::kRectangular: a0_ = 1.0; a1_ = 0.0; break;
    }
  }

  double magnitude(double x) const {
    return std::abs(a0_ * dirichlet(x) - 0.5 * a1_ * (dirichlet(x - 1.0) + dirichlet(x + 1.0)));
  }

 private:
  Complex dirichlet(double x) const {
    const double n = n_;
    const double s = std::sin(std::numbers::pi * x / n);
    const double mag = std::abs(s) < 1e-15 ? n : std::sin(std::numbers::pi * x) / s;
    return std::polar(mag, -std::numbers::pi * x * (n - 1.0) / n);
  }

  int n_;
  double a0_ = 0.5;
  double a1_ = 0.5;
};

// Fractional offset in [-0.5, 0.5] of a sinusoid peaking at bin k, found by
// matching the larger neighbour's magnitude ratio against the window kernel.
inline double peak_offset(const WindowKernel& kernel, double left, double center, double right) {
  const bool up = right > left;
  const double target = (up ? right : left) / center;
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double ratio = kernel.magnitude(1.0 - mid) / kernel.magnitude(mid);
    (ratio < target ? lo : hi) = mid;
  }
  const double d = 0.5 * (lo + hi);
  return up ? d : -d;
}

inline bool is_peak(std::span<const double> m, std::size_t k, double frame_max) {
  return m[k] > m[k - 1] && m[k] >= m[k + 1] && m[k] > 1e-6 * frame_max;
}

inline Matrix<double> phase_locked_init(const MagnitudeSpectrogram& target) {
  const auto& cfg = target.config;
  const std::size_t frames = target.frames.rows();
  const std::size_t bins = target.frames.cols();
  const double n_fft = cfg.n_fft;
  Matrix<double> phase(frames, bins, 0.0);

  struct Peak {
    double bin;    // interpolated frequency in bins
    double theta;  // phase at frame center
  };
  const bool hann = cfg.window == WindowType::kHann;
  const WindowKernel kernel(cfg.window, cfg.n_fft);
  std::vector<Peak> previous;
  for (std::size_t t = 0; t < frames; ++t) {
    const auto m = target.frames.row(t);
    double frame_max = 0.0;
    for (double v : m) frame_max = std::max(frame_max, v);
    std::vector<std::size_t> peak_bins;
    for (std::size_t k = 1; k + 1 < bins; ++k)
      if (is_peak(m, k, frame_max)) peak_bins.push_back(k);

    std::vector<Peak> current;
    for (std::size_t k : peak_bins) {
      double delta = peak_offset(kernel, m[k - 1], m[k], m[k + 1]);
      delta = std::clamp(delta, -0.5, 0.5);
      const double f = static_cast<double>(k) + delta;
      const Peak* match = nullptr;
      for (const auto& p : previous)
        if (std::abs(p.bin - f) < 1.0 && (!match || std::abs(p.bin - f) < std::abs(match->bin - f)))
          match = &p;
      const double omega_prev = 2.0 * std::numbers::pi * (match ? match->bin : f) / n_fft;
      const double omega = 2.0 * std::numbers::pi * f / n_fft;
      const double theta = match ? match->theta + 0.5 * (omega + omega_prev) * cfg.hop
                                 : omega * static_cast<double>(t) * cfg.hop;
      current.push_back({f, std::remainder(theta, 2.0 * std::numbers::pi)});
    }

    // Each bin follows the nearest peak by region (boundaries at magnitude minima).
    std::size_t region_start = 0;
    for (std::size_t p = 0; p < current.size(); ++p) {
      std::size_t region_end = bins;
      if (p + 1 < current.size()) {
        region_end = peak_bins[p];
        for (std::size_t k = peak_bins[p]; k <= peak_bins[p + 1]; ++k)
          if (m[k] < m[region_end]) region_end = k;
        ++region_end;
      }
      for (std::size_t k = region_start; k < region_end; ++k) {
        // Centered window: bin phase is the center phase minus pi*k, flipped
        // where the window kernel is negative (Hann sidelobes beyond 2 bins).
        const double d = std::abs(static_cast<double>(k) - current[p].bin);
        const bool flip = hann && d > 2.0 && static_cast<long>(std::floor(d)) % 2 == 0;
        phase(t, k) = current[p].theta - std::numbers::pi * static_cast<double>(k) +
                      (flip ? std::numbers::pi : 0.0);
      }
      region_start = region_end;
    }
    previous = std::move(current);
  }
  return phase;
}

// Time-domain starting point from phase-locked frames. Frames that lie fully
// inside the signal are overlap-added; samples they weight weakly (the signal
// ends, where reflect padding makes the phase estimate unreliable) are
// continued from the nearest such frame as a sum of its spectral peaks.
inline Waveform seed_signal(const MagnitudeSpectrogram& target, const Matrix<double>& phase,
                            double offset) {
  const auto& cfg = target.config;
  const std::size_t n = target.num_samples;
  const long n_fft = cfg.n_fft;
  const long pad = n_fft / 2;
  const auto window = make_window(cfg.window, cfg.n_fft);
  const FftPlan plan(static_cast<std::size_t>(n_fft));
  const WindowKernel kernel(cfg.window, cfg.n_fft);

  std::vector<double> num(n, 0.0), den(n, 0.0);
  std::vector<Complex> spec(target.frames.cols());
  long first = -1, last = -1;
  for (std::size_t t = 0; t < target.frames.rows(); ++t) {
    const long start = static_cast<long>(t) * cfg.hop - pad;
    if (start < 0 || start + n_fft > static_cast<long>(n)) continue;
    if (first < 0) first = static_cast<long>(t);
    last = static_cast<long>(t);
    for (std::size_t k = 0; k < spec.size(); ++k)
      spec[k] = std::polar(target.frames(t, k), phase(t, k) + offset);
    const auto frame = plan.irfft(spec);
    for (long j = 0; j < n_fft; ++j) {
      num[start + j] += window[j] * frame[j];
      den[start + j] += window[j] * window[j];
    }
  }

  ComplexSpectrogram fallback_spec{Matrix<Complex>(target.frames.rows(), target.frames.cols()), cfg, n};
  if (first < 0) {
    for (std::size_t i = 0; i < phase.data().size(); ++i)
      fallback_spec.frames.data()[i] = std::polar(target.frames.data()[i], phase.data()[i] + offset);
    return synthesize(fallback_spec);
  }

  // Sinusoids (amplitude, frequency, phase at the frame center) of a frame's peaks.
  struct Partial {
    double amplitude, omega, phase;
  };
  auto partials = [&](std::size_t t) {
    const auto m = target.frames.row(t);
    double frame_max = 0.0;
    for (double v : m) frame_max = std::max(frame_max, v);
    std::vector<Partial> out;
    for (std::size_t k = 1; k + 1 < m.size(); ++k) {
      if (!is_peak(m, k, frame_max)) continue;
      const double d = peak_offset(kernel, m[k - 1], m[k], m[k + 1]);
      out.push_back({2.0 * m[k] / kernel.magnitude(d),
                     2.0 * std::numbers::pi * (static_cast<double>(k) + d) / static_cast<double>(n_fft),
                     phase(t, k) + offset + std::numbers::pi * static_cast<double>(k)});
    }
    return out;
  };
  const auto head = partials(static_cast<std::size_t>(first));
  const auto tail = partials(static_cast<std::size_t>(last));
  auto continue_frame = [&](const std::vector<Partial>& ps, long t, std::size_t i) {
    const double dt = static_cast<double>(i) - static_cast<double>(t) * cfg.hop;
    double v = 0.0;
    for (const auto& p : ps) v += p.amplitude * std::cos(p.phase + p.omega * dt);
    return v;
  };

  Waveform out{std::vector<double>(n, 0.0), cfg.sample_rate};
  const double min_weight = 1e-2;
  for (std::size_t i = 0; i < n; ++i) {
    if (den[i] > min_weight) {
      out.samples[i] = num[i] / den[i];
    } else {
      const bool before = static_cast<long>(i) < first * cfg.hop;
      out.samples[i] = before ? continue_frame(head, first, i) : continue_frame(tail, last, i);
    }
  }
  return out;
}

// Projects a complex spectrogram onto the target magnitudes, keeping phase.
inline void impose_magnitude(ComplexSpectrogram& spec, const Matrix<double>& target) {
  for (std::size_t i = 0; i < spec.frames.data().size(); ++i) {
    const Complex c = spec.frames.data()[i];
    const double a = std::abs(c);
    const double mag = target.data()[i];
    spec.frames.data()[i] = a > 0.0 ? c * (mag / a) : Complex(mag, 0.0);
  }
}

// The phase-locked tracks are only known up to a common rotation, but the
// reflect-padded edge frames are not rotation invariant. Pick the rotation
// whose seed signal best matches the target: coarse grid, then golden section.
inline ComplexSpectrogram phase_locked_estimate(const MagnitudeSpectrogram& target) {
  const auto& cfg = target.config;
  const auto phase = phase_locked_init(target);
  auto error_at = [&](double offset) {
    return spectral_convergence(stft(seed_signal(target, phase, offset), cfg).frames, target.frames);
  };
  constexpr int kGrid = 32;
  const double step = 2.0 * std::numbers::pi / kGrid;
  double best = INFINITY, best_offset = 0.0;
  for (int g = 0; g < kGrid; ++g) {
    const double e = error_at(g * step);
    if (e < best) {
      best = e;
      best_offset = g * step;
    }
  }
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_offset - step, b = best_offset + step;
  double c = b - golden * (b - a), d = a + golden * (b - a);
  double fc = error_at(c), fd = error_at(d);
  for (int i = 0; i < 30; ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - golden * (b - a); fc = error_at(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + golden * (b - a); fd = error_at(d);
    }
  }
  const double refined = 0.5 * (a + b);
  const double offset = error_at(refined) < best ? refined : best_offset;
  auto estimate = analyze(seed_signal(target, phase, offset), cfg);
  impose_magnitude(estimate, target.frames);
  return estimate;
}

}  // namespace detail

struct GriffinLimResult {
  Waveform waveform;
  /// errors[t] is the spectral convergence after iteration t + 1.
  std::vector<double> errors;
};

/// Classical Griffin-Lim: alternating projections between the magnitude
/// constraint and the set of consistent spectrograms, no momentum. The error
/// sequence is non-increasing whatever the initial phase.
inline GriffinLimResult griffin_lim(const MagnitudeSpectrogram& target, int iterations,
                                    PhaseInit init = PhaseInit::kPhaseLocked) {
  const auto& cfg = target.config;
  cfg.validate();
  if (iterations < 1) throw ConfigError("griffin_lim: iterations must be >= 1");
  if (target.num_samples == 0) throw InputError("griffin_lim: magnitude carries no signal length");
  if (target.frames.rows() != frame_count(target.num_samples, cfg.hop) ||
      target.frames.cols() != static_cast<std::size_t>(cfg.n_bins()))
    throw InputError("griffin_lim: magnitude shape inconsistent with its config");
  bool all_zero = true;
  for (double v : target.frames.data()) {
    if (!std::isfinite(v) || v < 0.0)
      throw InputError("griffin_lim: magnitudes must be finite and non-negative");
    if (v != 0.0) all_zero = false;
  }

  GriffinLimResult result;
  if (all_zero) {
    result.waveform = Waveform{std::vector<double>(target.num_samples, 0.0), cfg.sample_rate};
    result.errors.assign(static_cast<std::size_t>(iterations), 0.0);
    return result;
  }

  ComplexSpectrogram estimate;
  if (init == PhaseInit::kPhaseLocked) {
    estimate = detail::phase_locked_estimate(target);
  } else {
    estimate = ComplexSpectrogram{Matrix<Complex>(target.frames.rows(), target.frames.cols()), cfg,
                                  target.num_samples};
    for (std::size_t i = 0; i < target.frames.data().size(); ++i)
      estimate.frames.data()[i] = target.frames.data()[i];
  }

  Waveform x;
  for (int it = 0; it < iterations; ++it) {
    x = synthesize(estimate);
    auto rebuilt = analyze(x, cfg);
    result.errors.push_back(spectral_convergence(magnitude(rebuilt).frames, target.frames));
    estimate = std::move(rebuilt);
    detail::impose_magnitude(estimate, target.frames);
  }
  result.waveform = std::move(x);
  return result;
}

}  // namespace foundtts
