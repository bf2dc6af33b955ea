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
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "foundtts/dsp/wav_io.hpp"
#include "foundtts/error.hpp"
#include "foundtts/langsel/distance.hpp"

namespace foundtts {

struct UtteranceEmbedding {
  std::string utterance_id;
  std::string language;
  Vec vector;
};

/// Utterance embeddings grouped by language label (ordered by label).
struct LanguageSet {
  std::map<std::string, std::vector<UtteranceEmbedding>> languages;

  std::size_t dimension() const {
    for (const auto& [_, utts] : languages)
      if (!utts.empty()) return utts.front().vector.size();
    return 0;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& [l, _] : languages) out.push_back(l);
    return out;
  }

  void add(UtteranceEmbedding e) {
    auto lang = e.language;
    languages[lang].push_back(std::move(e));
  }

  /// Non-empty languages, one shared dimension, finite entries.
  void validate(std::size_t min_languages = 1) const {
    if (languages.size() < min_languages)
      throw InputError("need at least " + std::to_string(min_languages) + " languages, got " +
                       std::to_string(languages.size()));
    const std::size_t d = dimension();
    if (d == 0) throw InputError("embeddings have dimension 0");
    for (const auto& [label, utts] : languages) {
      if (utts.empty()) throw InputError("language '" + label + "' has no utterances");
      for (const auto& u : utts) {
        if (u.vector.size() != d)
          throw InputError("utterance '" + u.utterance_id + "' has dimension " + std::to_string(u.vector.size()) +
                           ", expected " + std::to_string(d));
        for (double v : u.vector)
          if (!std::isfinite(v)) throw InputError("utterance '" + u.utterance_id + "' has a non-finite entry");
      }
    }
  }
};

// Embedding file layout (little endian):
//   "FTEM" | u32 version | u32 count | u32 D | u32 label bytes | label
//   then per row: u32 id bytes | id | D float32
inline constexpr std::string_view kEmbeddingMagic = "FTEM";
inline constexpr std::uint32_t kEmbeddingVersion = 1;

inline std::string encode_embeddings(const std::string& language, const std::vector<UtteranceEmbedding>& rows) {
  const std::size_t d = rows.empty() ? 0 : rows.front().vector.size();
  std::string b(kEmbeddingMagic);
  detail::put_u32(b, kEmbeddingVersion);
  detail::put_u32(b, static_cast<std::uint32_t>(rows.size()));
  detail::put_u32(b, static_cast<std::uint32_t>(d));
  detail::put_u32(b, static_cast<std::uint32_t>(language.size()));
  b += language;
  for (const auto& r : rows) {
    if (r.vector.size() != d) throw InputError("embedding rows differ in dimension");
    detail::put_u32(b, static_cast<std::uint32_t>(r.utterance_id.size()));
    b += r.utterance_id;
    for (double v : r.vector) {
      const float f = static_cast<float>(v);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      detail::put_u32(b, u);
    }
  }
  return b;
}

inline std::vector<UtteranceEmbedding> decode_embeddings(std::string_view b) {
  auto need = [&](std::size_t at, std::size_t n) {
    if (at + n > b.size()) throw InputError("embedding file truncated");
  };
  need(0, 20);
  if (b.substr(0, 4) != kEmbeddingMagic) throw InputError("embedding file: bad magic");
  if (detail::read_u32(b, 4) != kEmbeddingVersion) throw InputError("embedding file: unsupported version");
  const std::size_t count = detail::read_u32(b, 8);
  const std::size_t d = detail::read_u32(b, 12);
  const std::size_t label_len = detail::read_u32(b, 16);
  std::size_t pos = 20;
  need(pos, label_len);
  const std::string label(b.substr(pos, label_len));
  pos += label_len;
  std::vector<UtteranceEmbedding> rows;
  rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    need(pos, 4);
    const std::size_t id_len = detail::read_u32(b, pos);
    pos += 4;
    need(pos, id_len + 4 * d);
    UtteranceEmbedding e{std::string(b.substr(pos, id_len)), label, Vec(d)};
    pos += id_len;
    for (std::size_t k = 0; k < d; ++k, pos += 4) {
      const std::uint32_t u = detail::read_u32(b, pos);
      float f;
      std::memcpy(&f, &u, 4);
      e.vector[k] = f;
    }
    rows.push_back(std::move(e));
  }
  if (pos != b.size()) throw InputError("embedding file: trailing bytes");
  return rows;
}

inline void write_embeddings(const std::filesystem::path& path, const std::string& language,
                             const std::vector<UtteranceEmbedding>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  const auto bytes = encode_embeddings(language, rows);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline std::vector<UtteranceEmbedding> read_embeddings(const std::filesystem::path& path) {
  try {
    return decode_embeddings(read_file_bytes(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

inline LanguageSet load_language_set(const std::vector<std::filesystem::path>& files) {
  LanguageSet ls;
  for (const auto& f : files)
    for (auto& e : read_embeddings(f)) ls.add(std::move(e));
  return ls;
}

}  // namespace foundtts
