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
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "foundtts/dsp/waveform.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

enum class WavEncoding { kPcm16, kFloat32 };

namespace detail {

inline std::uint32_t read_u32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[at + i]);
  return v;
}
inline std::uint16_t read_u16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}
inline void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xff));
  b.push_back(static_cast<char>(v >> 8));
}

}  // namespace detail

/// Decodes a RIFF/WAVE byte buffer. Integer PCM (8/16/24/32-bit) and IEEE
/// float (32/64-bit) are accepted, including WAVE_FORMAT_EXTENSIBLE headers.
/// Multi-channel audio is averaged down to mono.
inline Waveform decode_wav(std::string_view bytes) {
  using detail::read_u16;
  using detail::read_u32;
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
    throw InputError("wav: not a RIFF/WAVE stream");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::string_view data;
  bool have_fmt = false, have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const auto id = bytes.substr(pos, 4);
    const std::size_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(size, bytes.size() - body);
    if (id == "fmt ") {
      if (avail < 16) throw InputError("wav: truncated fmt chunk");
      format = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      if (format == 0xFFFE && avail >= 26) format = read_u16(bytes, body + 24);
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.substr(body, avail);
      have_data = true;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || !have_data) throw InputError("wav: missing fmt or data chunk");
  if (channels == 0 || rate == 0) throw InputError("wav: invalid channel count or sample rate");
  const bool is_float = format == 3;
  if (format != 1 && !is_float)
    throw InputError("wav: unsupported format tag " + std::to_string(format));
  if ((is_float && bits != 32 && bits != 64) || (!is_float && (bits == 0 || bits > 32 || bits % 8)))
    throw InputError("wav: unsupported bit depth " + std::to_string(bits));

  const std::size_t width = bits / 8;
  const std::size_t frames = data.size() / (width * channels);
  Waveform w{std::vector<double>(frames, 0.0), static_cast<int>(rate)};
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const char* p = data.data() + (f * channels + c) * width;
      double v = 0.0;
      if (is_float && bits == 32) {
        float x;
        std::memcpy(&x, p, 4);
        v = x;
      } else if (is_float) {
        std::memcpy(&v, p, 8);
      } else if (bits == 8) {
        v = (static_cast<unsigned char>(p[0]) - 128) / 128.0;
      } else {
        std::int64_t x = 0;
        for (std::size_t i = 0; i < width; ++i)
          x |= static_cast<std::int64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
        const std::int64_t sign = std::int64_t{1} << (bits - 1);
        x = (x ^ sign) - sign;
        v = static_cast<double>(x) / static_cast<double>(sign);
      }
      acc += v;
    }
    w.samples[f] = acc / channels;
  }
  return w;
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Waveform read_wav(const std::filesystem::path& path) {
  try {
    return decode_wav(read_file_bytes(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

/// Mono RIFF/WAVE bytes. PCM16 output is clipped to [-1, 1].
inline std::string encode_wav(const Waveform& w, WavEncoding enc = WavEncoding::kPcm16) {
  using detail::put_u16;
  using detail::put_u32;
  const std::uint16_t bits = enc == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(w.samples.size() * (bits / 8));
  std::string b;
  b.reserve(44 + data_bytes);
  b += "RIFF";
  put_u32(b, 36 + data_bytes);
  b += "WAVEfmt ";
  put_u32(b, 16);
  put_u16(b, enc == WavEncoding::kPcm16 ? 1 : 3);
  put_u16(b, 1);
  put_u32(b, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(b, static_cast<std::uint32_t>(w.sample_rate) * (bits / 8));
  put_u16(b, bits / 8);
  put_u16(b, bits);
  b += "data";
  put_u32(b, data_bytes);
  for (double s : w.samples) {
    if (enc == WavEncoding::kPcm16) {
      const double c = std::clamp(s, -1.0, 1.0);
      put_u16(b, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(c * 32767.0))));
    } else {
      const float f = static_cast<float>(s);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      put_u32(b, u);
    }
  }
  return b;
}

inline void write_wav(const std::filesystem::path& path, const Waveform& w,
                      WavEncoding enc = WavEncoding::kPcm16) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  const auto bytes = encode_wav(w, enc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace foundtts
