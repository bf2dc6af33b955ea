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

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "foundtts/dsp/matrix.hpp"
#include "foundtts/dsp/wav_io.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

// Container layout (little endian):
//   "FTSP" | u32 version | u32 rows | u32 cols | u64 config digest | rows*cols float32
inline constexpr std::string_view kSpectrogramMagic = "FTSP";
inline constexpr std::uint32_t kSpectrogramVersion = 1;

struct StoredMatrix {
  Matrix<double> values;
  std::uint64_t config_digest = 0;
};

inline std::string encode_matrix(const Matrix<double>& m, std::uint64_t digest) {
  std::string b(kSpectrogramMagic);
  detail::put_u32(b, kSpectrogramVersion);
  detail::put_u32(b, static_cast<std::uint32_t>(m.rows()));
  detail::put_u32(b, static_cast<std::uint32_t>(m.cols()));
  detail::put_u32(b, static_cast<std::uint32_t>(digest & 0xffffffffu));
  detail::put_u32(b, static_cast<std::uint32_t>(digest >> 32));
  for (double v : m.data()) {
    const float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    detail::put_u32(b, u);
  }
  return b;
}

inline StoredMatrix decode_matrix(std::string_view b) {
  if (b.size() < 24 || b.substr(0, 4) != kSpectrogramMagic)
    throw InputError("spectrogram container: bad magic");
  if (detail::read_u32(b, 4) != kSpectrogramVersion)
    throw InputError("spectrogram container: unsupported version");
  const std::size_t rows = detail::read_u32(b, 8);
  const std::size_t cols = detail::read_u32(b, 12);
  const std::uint64_t digest =
      detail::read_u32(b, 16) | (static_cast<std::uint64_t>(detail::read_u32(b, 20)) << 32);
  if (b.size() != 24 + rows * cols * 4) throw InputError("spectrogram container: truncated payload");
  StoredMatrix out{Matrix<double>(rows, cols), digest};
  for (std::size_t i = 0; i < rows * cols; ++i) {
    const std::uint32_t u = detail::read_u32(b, 24 + 4 * i);
    float f;
    std::memcpy(&f, &u, 4);
    out.values.data()[i] = f;
  }
  return out;
}

inline void write_matrix(const std::filesystem::path& path, const Matrix<double>& m,
                         std::uint64_t digest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  const auto bytes = encode_matrix(m, digest);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline StoredMatrix read_matrix(const std::filesystem::path& path) {
  return decode_matrix(read_file_bytes(path));
}

}  // namespace foundtts
