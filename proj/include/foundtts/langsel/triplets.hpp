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
#include <string>
#include <vector>

#include "foundtts/error.hpp"
#include "foundtts/langsel/embedding.hpp"
#include "foundtts/rng.hpp"

namespace foundtts {

/// Indices into a LanguageSet: (language, utterance) for each role.
struct TripletRef {
  std::string anchor_lang;
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::string negative_lang;
  std::size_t negative = 0;
  friend bool operator==(const TripletRef&, const TripletRef&) = default;
};

/// Uniform random triplets: anchor language uniform, anchor and positive two
/// distinct utterances of it, negative language uniform among the others.
inline std::vector<TripletRef> sample_triplets(const LanguageSet& ls, std::size_t n, std::uint64_t seed) {
  if (ls.languages.size() < 2) throw InputError("triplet sampling needs at least 2 languages");
  for (const auto& [label, utts] : ls.languages)
    if (utts.size() < 2)
      throw InputError("language '" + label + "' has " + std::to_string(utts.size()) +
                       " utterance(s); triplet sampling needs at least 2");
  const auto labels = ls.labels();
  Rng rng(seed);
  std::vector<TripletRef> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t li = rng.below(labels.size());
    std::size_t lj = rng.below(labels.size() - 1);
    if (lj >= li) ++lj;
    const auto& anchors = ls.languages.at(labels[li]);
    const auto& negatives = ls.languages.at(labels[lj]);
    TripletRef tr;
    tr.anchor_lang = labels[li];
    tr.negative_lang = labels[lj];
    tr.anchor = rng.below(anchors.size());
    tr.positive = rng.below(anchors.size() - 1);
    if (tr.positive >= tr.anchor) ++tr.positive;
    tr.negative = rng.below(negatives.size());
    out.push_back(std::move(tr));
  }
  return out;
}

}  // namespace foundtts
