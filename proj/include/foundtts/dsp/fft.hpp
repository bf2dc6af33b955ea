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
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace foundtts {

using Complex = std::complex<double>;

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n && !(n & (n - 1)); }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative radix-2 transform. `sign` is -1 for forward, +1 for inverse
// (unnormalized).
inline void radix2(std::vector<Complex>& a, const std::vector<Complex>& twiddles, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        Complex w = twiddles[k * stride];
        if (sign > 0) w = std::conj(w);
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace detail

/// Complex DFT of a fixed size. Power-of-two sizes use radix-2 directly,
/// other sizes go through Bluestein's chirp-z on a padded radix-2 plan.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("FftPlan: size must be positive");
    const std::size_t m = detail::is_power_of_two(n) ? n : detail::next_power_of_two(2 * n - 1);
    twiddles_.resize(m / 2 + 1);
    for (std::size_t k = 0; k < twiddles_.size(); ++k)
      twiddles_[k] = std::polar(1.0, -2.0 * std::numbers::pi * double(k) / double(m));
    if (m != n) {
      chirp_.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the angle argument small for large n.
        const std::size_t k2 = (k * k) % (2 * n);
        chirp_[k] = std::polar(1.0, -std::numbers::pi * double(k2) / double(n));
      }
      kernel_.assign(m, Complex{});
      kernel_[0] = std::conj(chirp_[0]);
      for (std::size_t k = 1; k < n; ++k) kernel_[k] = kernel_[m - k] = std::conj(chirp_[k]);
      detail::radix2(kernel_, twiddles_, -1);
    }
  }

  std::size_t size() const { return n_; }

  /// Forward transform, X[k] = sum_n x[n] exp(-2 pi i k n / N).
  void forward(std::vector<Complex>& data) const { transform(data, -1); }

  /// Unnormalized inverse transform.
  void inverse(std::vector<Complex>& data) const { transform(data, +1); }

  /// Real-input transform returning bins 0..N/2.
  std::vector<Complex> rfft(std::span<const double> x) const {
    std::vector<Complex> buf(n_);
    for (std::size_t i = 0; i < n_; ++i) buf[i] = i < x.size() ? x[i] : 0.0;
    forward(buf);
    buf.resize(n_ / 2 + 1);
    return buf;
  }

  /// Inverse of rfft; the half spectrum is extended with Hermitian symmetry.
  std::vector<double> irfft(std::span<const Complex> half) const {
    std::vector<Complex> buf(n_);
    const std::size_t bins = n_ / 2 + 1;
    for (std::size_t k = 0; k < bins && k < half.size(); ++k) buf[k] = half[k];
    for (std::size_t k = bins; k < n_; ++k) buf[k] = std::conj(buf[n_ - k]);
    // Bins that must be real for a real signal.
    buf[0] = buf[0].real();
    if (n_ % 2 == 0) buf[n_ / 2] = buf[n_ / 2].real();
    inverse(buf);
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = buf[i].real() / double(n_);
    return out;
  }

 private:
  void transform(std::vector<Complex>& data, int sign) const {
    if (data.size() != n_) throw std::invalid_argument("FftPlan: size mismatch");
    if (chirp_.empty()) {
      detail::radix2(data, twiddles_, sign);
      return;
    }
    const std::size_t m = kernel_.size();
    // Inverse via conjugation: ifft(x) = conj(fft(conj(x))).
    std::vector<Complex> a(m, Complex{});
    for (std::size_t k = 0; k < n_; ++k) {
      const Complex x = sign > 0 ? std::conj(data[k]) : data[k];
      a[k] = x * chirp_[k];
    }
    detail::radix2(a, twiddles_, -1);
    for (std::size_t k = 0; k < m; ++k) a[k] *= kernel_[k];
    detail::radix2(a, twiddles_, +1);
    for (std::size_t k = 0; k < n_; ++k) {
      const Complex y = a[k] / double(m) * chirp_[k];
      data[k] = sign > 0 ? std::conj(y) : y;
    }
  }

  std::size_t n_;
  std::vector<Complex> twiddles_;
  std::vector<Complex> chirp_;
  std::vector<Complex> kernel_;
};

}  // namespace foundtts
