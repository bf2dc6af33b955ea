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

#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <random>
#include <thread>

#include "foundtts/dsp/fft.hpp"
#include "foundtts/dsp/griffin_lim.hpp"
#include "foundtts/dsp/mel.hpp"
#include "foundtts/dsp/resample.hpp"
#include "foundtts/dsp/spectrogram_io.hpp"
#include "foundtts/dsp/stft.hpp"
#include "foundtts/dsp/wav_io.hpp"
#include "test_support.hpp"

using namespace foundtts;
using foundtts::testing::rel_l2;
using foundtts::testing::sine;

namespace {

// O(N^2) DFT of the non-negative bins.
std::vector<std::complex<double>> direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * j % n) / n);
    out[k] = acc;
  }
  return out;
}

// Reflect padding written out directly: x[-i] = x[i], x[n-1+i] = x[n-1-i].
double padded_sample(const std::vector<double>& x, long p) {
  const long n = static_cast<long>(x.size());
  while (p < 0 || p >= n) p = p < 0 ? -p : 2 * (n - 1) - p;
  return x[static_cast<std::size_t>(p)];
}

Waveform noise(std::size_t n, std::uint64_t seed, int sr = 22050) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 0.3);
  Waveform w{std::vector<double>(n), sr};
  for (auto& v : w.samples) v = nd(gen);
  return w;
}

}  // namespace

TEST(Fft, MatchesDirectDft) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = u(gen);
    const auto fast = FftPlan(n).rfft(x);
    const auto slow = direct_dft(x);
    for (std::size_t k = 0; k < slow.size(); ++k) EXPECT_NEAR(std::abs(fast[k] - slow[k]), 0.0, 1e-10) << n;
    const auto back = FftPlan(n).irfft(fast);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(back[j], x[j], 1e-12);
  }
}

TEST(Stft, FrameCountFormula) {
  AnalysisConfig cfg;
  EXPECT_EQ(stft(Waveform{std::vector<double>(22050, 0.0), 22050}, cfg).frames.rows(), 87u);
  EXPECT_EQ(stft(Waveform{std::vector<double>(256, 0.1), 22050}, cfg).frames.rows(), 2u);
  std::mt19937_64 gen(3);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + gen() % 50000;
    const auto m = stft(noise(n, i), cfg);
    EXPECT_EQ(m.frames.rows(), 1 + n / 256);
    EXPECT_EQ(m.frames.cols(), 513u);
  }
}

TEST(Stft, ZeroSignalGivesZeroMagnitude) {
  const auto m = stft(Waveform{std::vector<double>(22050, 0.0), 22050}, AnalysisConfig{});
  EXPECT_EQ(m.frames.rows(), 87u);
  for (double v : m.frames.data()) EXPECT_EQ(v, 0.0);
}

TEST(Stft, FramesMatchWindowedDirectDft) {
  AnalysisConfig cfg;
  cfg.n_fft = 64;
  cfg.hop = 16;
  const auto w = noise(200, 9);
  const auto spec = analyze(w, cfg);
  const auto win = make_window(cfg.window, cfg.n_fft);
  for (std::size_t t : {0u, 3u, 7u, 12u}) {
    std::vector<double> frame(64);
    for (long j = 0; j < 64; ++j) frame[j] = padded_sample(w.samples, static_cast<long>(t) * 16 - 32 + j) * win[j];
    const auto ref = direct_dft(frame);
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(std::abs(spec.frames(t, k) - ref[k]), 0.0, 1e-10);
  }
}

TEST(Stft, SinePeaksAtItsBin) {
  AnalysisConfig cfg;
  const double bin_hz = 22050.0 / 1024;
  const auto m = stft(sine(10 * bin_hz, 1.0, 22050), cfg);
  for (std::size_t t = 4; t + 4 < m.frames.rows(); ++t) {
    const auto row = m.frames.row(t);
    EXPECT_EQ(std::max_element(row.begin(), row.end()) - row.begin(), 10);
  }
}

TEST(Stft, RoundTripIsExact) {
  std::mt19937_64 gen(5);
  for (WindowType wt : {WindowType::kHann, WindowType::kHamming, WindowType::kRectangular}) {
    for (int i = 0; i < 8; ++i) {
      AnalysisConfig cfg;
      cfg.window = wt;
      const std::size_t n = 2 + gen() % 30000;
      const auto w = noise(n, 100 + i);
      const auto back = synthesize(analyze(w, cfg));
      ASSERT_EQ(back.samples.size(), n);
      EXPECT_LT(rel_l2(back.samples, w.samples), 1e-6) << window_name(wt) << " n=" << n;
    }
  }
}

TEST(Stft, ShortSignalsRoundTrip) {
  // Pads much longer than the signal bounce several times.
  for (std::size_t n : {2u, 3u, 17u, 100u, 511u}) {
    const auto w = noise(n, n);
    EXPECT_LT(rel_l2(synthesize(analyze(w, AnalysisConfig{})).samples, w.samples), 1e-6) << n;
  }
}

TEST(Stft, Errors) {
  AnalysisConfig cfg;
  EXPECT_THROW(stft(Waveform{{}, 22050}, cfg), InputError);
  EXPECT_THROW(stft(Waveform{{0.1, 0.2}, 16000}, cfg), ConfigError);
  EXPECT_THROW(stft(Waveform{{0.1, std::nan("")}, 22050}, cfg), InputError);
  cfg.hop = 0;
  EXPECT_THROW(stft(Waveform{{0.1}, 22050}, cfg), ConfigError);
}

TEST(Stft, ConcurrentCallsAgree) {
  const auto w = noise(30000, 77);
  const auto ref = stft(w, AnalysisConfig{});
  std::vector<MagnitudeSpectrogram> out(4);
  std::vector<std::thread> ts;
  for (int i = 0; i < 4; ++i) ts.emplace_back([&, i] { out[i] = stft(w, AnalysisConfig{}); });
  for (auto& t : ts) t.join();
  for (const auto& o : out) EXPECT_EQ(o.frames, ref.frames);
}

TEST(Mel, FilterbankShapeAndCenters) {
  AnalysisConfig cfg;
  const auto fb = mel_filterbank(cfg);
  ASSERT_EQ(fb.weights.rows(), 80u);
  ASSERT_EQ(fb.weights.cols(), 513u);
  // Closed form in natural-log mel units: 1127 ln(1 + f/700).
  const double top = 1127.0 * std::log(1.0 + 11025.0 / 700.0);
  for (int m = 0; m < 80; ++m) {
    const double expect = 700.0 * (std::exp(top * (m + 1) / 81.0 / 1127.0) - 1.0);
    EXPECT_LT(std::abs(fb.center_hz[m] - expect), 0.5) << m;
    const auto row = fb.weights.row(m);
    EXPECT_DOUBLE_EQ(*std::max_element(row.begin(), row.end()), 1.0);
    for (double v : row) EXPECT_GE(v, 0.0);
    // The peak bin lies within one bin of the center.
    const auto peak = std::max_element(row.begin(), row.end()) - row.begin();
    EXPECT_LE(std::abs(peak * 22050.0 / 1024 - fb.center_hz[m]), 22050.0 / 1024);
    if (m > 0) {
      EXPECT_GT(fb.center_hz[m], fb.center_hz[m - 1]);
    }
  }
}

TEST(Mel, SingleBandPeaksMidBand) {
  AnalysisConfig cfg;
  cfg.n_mels = 1;
  const auto fb = mel_filterbank(cfg);
  const double mid = 700.0 * (std::pow(10.0, (2595.0 * std::log10(1.0 + 11025.0 / 700.0) / 2) / 2595.0) - 1.0);
  EXPECT_NEAR(fb.center_hz[0], mid, 1e-9);
  const auto row = fb.weights.row(0);
  EXPECT_DOUBLE_EQ(*std::max_element(row.begin(), row.end()), 1.0);
}

TEST(Mel, EveryInteriorBinCovered) {
  const auto fb = mel_filterbank(AnalysisConfig{});
  for (std::size_t k = 1; k + 1 < fb.weights.cols(); ++k) {
    double s = 0.0;
    for (std::size_t m = 0; m < fb.weights.rows(); ++m) s += fb.weights(m, k);
    EXPECT_GT(s, 0.0) << k;
  }
}

TEST(Mel, InvalidConfigs) {
  AnalysisConfig cfg;
  cfg.n_fft = 64;
  cfg.hop = 16;
  cfg.n_mels = 80;
  EXPECT_THROW(mel_filterbank(cfg), ConfigError);
  cfg = {};
  cfg.fmin = 12000;
  EXPECT_THROW(mel_filterbank(cfg), ConfigError);
  cfg = {};
  cfg.fmax = 20000;
  EXPECT_THROW(mel_filterbank(cfg), ConfigError);
}

TEST(Mel, SilenceHitsTheLogFloor) {
  const auto m = mel_spectrogram(Waveform{std::vector<double>(4000, 0.0), 22050}, AnalysisConfig{});
  EXPECT_EQ(m.frames.rows(), 1 + 4000 / 256u);
  for (double v : m.frames.data()) EXPECT_DOUBLE_EQ(v, std::log(kLogMelFloor));
}

TEST(Mel, ToneLandsInNearestBand) {
  AnalysisConfig cfg;
  const auto w = sine(1000.0, 0.5, 22050);
  const auto mel = mel_spectrogram(w, cfg);
  const auto fb = mel_filterbank(cfg);
  // Oracle: windowed direct DFT of one interior frame times the filterbank.
  const std::size_t t = 10;
  const auto win = make_window(cfg.window, cfg.n_fft);
  std::vector<double> frame(1024);
  for (long j = 0; j < 1024; ++j) frame[j] = padded_sample(w.samples, static_cast<long>(t) * 256 - 512 + j) * win[j];
  const auto dft = direct_dft(frame);
  std::vector<double> bands(80, 0.0);
  for (int m = 0; m < 80; ++m)
    for (std::size_t k = 0; k < dft.size(); ++k) bands[m] += fb.weights(m, k) * std::abs(dft[k]);
  for (int m = 0; m < 80; ++m) EXPECT_NEAR(mel.frames(t, m), std::log(std::max(kLogMelFloor, bands[m])), 1e-6);
  const auto row = mel.frames.row(t);
  const auto best = std::max_element(row.begin(), row.end()) - row.begin();
  // The winning band is one of the two whose centers bracket the tone.
  std::size_t above = 0;
  while (fb.center_hz[above] < 1000.0) ++above;
  EXPECT_TRUE(static_cast<std::size_t>(best) == above || static_cast<std::size_t>(best) + 1 == above) << best;
  EXPECT_EQ(best, std::max_element(bands.begin(), bands.end()) - bands.begin());
}

TEST(GriffinLim, SineConvergesMonotonically) {
  AnalysisConfig cfg;
  const auto w = sine(440.0, 0.5, 22050);
  const auto target = stft(w, cfg);
  const auto r = griffin_lim(target, 100);
  ASSERT_EQ(r.errors.size(), 100u);
  EXPECT_LT(r.errors.back(), 1e-3);
  for (std::size_t i = 1; i < r.errors.size(); ++i) EXPECT_LE(r.errors[i], r.errors[i - 1] * (1 + 1e-7) + 1e-12);
  EXPECT_EQ(r.waveform.samples.size(), w.samples.size());
}

TEST(GriffinLim, ZeroMagnitudeGivesSilence) {
  AnalysisConfig cfg;
  const auto target = stft(Waveform{std::vector<double>(5000, 0.0), 22050}, cfg);
  const auto r = griffin_lim(target, 5);
  EXPECT_TRUE(r.waveform.all_zero());
  EXPECT_EQ(r.waveform.samples.size(), 5000u);
}

TEST(GriffinLim, HarmonicSignalDoesNotDiverge) {
  // Vowel-like: harmonics of a gliding pitch under a slow amplitude envelope, plus noise.
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd(0.0, 0.01);
  Waveform w{std::vector<double>(11025), 22050};
  double phase = 0.0;
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    const double t = static_cast<double>(i) / 22050;
    phase += 2 * std::numbers::pi * (120.0 + 40.0 * t) / 22050;
    double v = 0.0;
    for (int h = 1; h <= 8; ++h) v += std::sin(h * phase) / h;
    w.samples[i] = 0.2 * v * (0.6 + 0.4 * std::sin(2 * std::numbers::pi * 3 * t)) + nd(gen);
  }
  AnalysisConfig cfg;
  for (auto init : {PhaseInit::kPhaseLocked, PhaseInit::kZero}) {
    const auto r = griffin_lim(stft(w, cfg), 60, init);
    EXPECT_LE(r.errors.back(), r.errors.front());
    for (double e : r.errors) EXPECT_TRUE(std::isfinite(e));
  }
}

TEST(GriffinLim, RejectsBadInput) {
  AnalysisConfig cfg;
  auto target = stft(sine(440.0, 0.1, 22050), cfg);
  EXPECT_THROW(griffin_lim(target, 0), ConfigError);
  target.frames(0, 0) = -1.0;
  EXPECT_THROW(griffin_lim(target, 3), InputError);
}

TEST(Resample, IdentityAndLength) {
  const auto w = sine(100.0, 1.0, 44100);
  const auto same = resample(w, 44100);
  EXPECT_EQ(same.samples, w.samples);
  const auto down = resample(w, 22050);
  EXPECT_EQ(down.sample_rate, 22050);
  EXPECT_NEAR(static_cast<double>(down.samples.size()), 22050.0, 1.0);
  EXPECT_NEAR(down.duration_seconds(), w.duration_seconds(), 1e-4);
  // The tone survives: compare interior samples with the analytic sine.
  double err = 0.0;
  for (std::size_t i = 2000; i + 2000 < down.samples.size(); ++i)
    err = std::max(err, std::abs(down.samples[i] - 0.5 * std::sin(2 * std::numbers::pi * 100.0 * i / 22050)));
  EXPECT_LT(err, 1e-3);
}

TEST(Resample, UpsamplePreservesTone) {
  const auto w = sine(440.0, 0.5, 16000);
  const auto up = resample(w, 22050);
  const auto m = stft(up, AnalysisConfig{});
  const auto row = m.frames.row(m.frames.rows() / 2);
  const auto peak = std::max_element(row.begin(), row.end()) - row.begin();
  EXPECT_NEAR(peak * 22050.0 / 1024, 440.0, 22050.0 / 1024);
}

TEST(WavIo, RoundTripPcm16AndFloat) {
  const auto w = sine(300.0, 0.2, 22050, 0.7);
  const auto pcm = decode_wav(encode_wav(w));
  EXPECT_EQ(pcm.sample_rate, 22050);
  ASSERT_EQ(pcm.samples.size(), w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i) EXPECT_NEAR(pcm.samples[i], w.samples[i], 2.0 / 32768);
  const auto f = decode_wav(encode_wav(w, WavEncoding::kFloat32));
  for (std::size_t i = 0; i < w.samples.size(); ++i) EXPECT_NEAR(f.samples[i], w.samples[i], 1e-7);
}

TEST(WavIo, StereoIsAveraged) {
  std::string b = "RIFF";
  detail::put_u32(b, 36 + 8);
  b += "WAVEfmt ";
  detail::put_u32(b, 16);
  detail::put_u16(b, 1);
  detail::put_u16(b, 2);
  detail::put_u32(b, 22050);
  detail::put_u32(b, 22050 * 4);
  detail::put_u16(b, 4);
  detail::put_u16(b, 16);
  b += "data";
  detail::put_u32(b, 8);
  for (std::int16_t s : {16384, 0, -16384, -16384}) detail::put_u16(b, static_cast<std::uint16_t>(s));
  const auto w = decode_wav(b);
  ASSERT_EQ(w.samples.size(), 2u);
  EXPECT_DOUBLE_EQ(w.samples[0], 0.25);
  EXPECT_DOUBLE_EQ(w.samples[1], -0.5);
}

TEST(WavIo, RejectsGarbage) {
  EXPECT_THROW(decode_wav("not a wav file at all"), InputError);
  auto b = encode_wav(sine(300.0, 0.01, 22050));
  EXPECT_THROW(decode_wav(b.substr(0, 30)), InputError);
  EXPECT_THROW(read_wav("/nonexistent/file.wav"), InputError);
}

TEST(SpectrogramIo, RoundTrip) {
  Matrix<double> m(3, 4);
  for (std::size_t i = 0; i < 12; ++i) m.data()[i] = 0.25 * static_cast<double>(i) - 1.0;
  const auto back = decode_matrix(encode_matrix(m, 0x0123456789abcdefull));
  EXPECT_EQ(back.values, m);
  EXPECT_EQ(back.config_digest, 0x0123456789abcdefull);
  EXPECT_THROW(decode_matrix("XXXX"), InputError);
  auto bytes = encode_matrix(m, 1);
  bytes.pop_back();
  EXPECT_THROW(decode_matrix(bytes), InputError);
}
