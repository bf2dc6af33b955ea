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
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "foundtts/dsp/waveform.hpp"

namespace foundtts::testing {

inline std::filesystem::path data_dir() { return FOUNDTTS_TEST_DATA; }

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("foundtts_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& p) const { return path_ / p; }

 private:
  std::filesystem::path path_;
};

inline Waveform sine(double hz, double seconds, int sr, double amp = 0.5, double phase = 0.0) {
  const auto n = static_cast<std::size_t>(std::lround(seconds * sr));
  Waveform w{std::vector<double>(n), sr};
  for (std::size_t i = 0; i < n; ++i) w.samples[i] = amp * std::sin(2 * std::numbers::pi * hz * i / sr + phase);
  return w;
}

/// Clean "speech" with Gamma(0.4) distributed amplitudes and random signs,
/// scaled to unit power.
inline std::vector<double> gamma_speech(std::size_t n, std::mt19937_64& gen) {
  std::gamma_distribution<double> g(0.4, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> x(n);
  double p = 0.0;
  for (auto& v : x) {
    v = g(gen) * (sign(gen) ? 1.0 : -1.0);
    p += v * v;
  }
  const double s = 1.0 / std::sqrt(p / static_cast<double>(n));
  for (auto& v : x) v *= s;
  return x;
}

/// Gamma speech plus white Gaussian noise at exactly `snr_db` (empirical
/// powers), peak-normalized to 0.5.
inline Waveform mixture_at_snr(double snr_db, std::size_t n, int sr, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto s = gamma_speech(n, gen);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> noise(n);
  double pn = 0.0;
  for (auto& v : noise) {
    v = nd(gen);
    pn += v * v;
  }
  pn /= static_cast<double>(n);
  const double k = std::sqrt(std::pow(10.0, -snr_db / 10.0) / pn);
  Waveform w{std::vector<double>(n), sr};
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = s[i] + k * noise[i];
    peak = std::max(peak, std::abs(w.samples[i]));
  }
  for (auto& v : w.samples) v *= 0.5 / peak;
  return w;
}

inline double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace foundtts::testing
