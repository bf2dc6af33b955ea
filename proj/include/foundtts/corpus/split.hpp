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
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "foundtts/corpus/manifest.hpp"
#include "foundtts/error.hpp"
#include "foundtts/rng.hpp"

namespace foundtts {

struct SplitSizes {
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
};

struct SplitResult {
  Manifest train, dev, test;
};

/// Seeded random partition. Dev and test take exactly the requested counts;
/// train takes everything left over, which is at least the requested count.
/// Each part keeps the manifest's original record order.
inline SplitResult split_manifest(const Manifest& m, const SplitSizes& sizes, std::uint64_t seed) {
  const std::size_t n = m.records.size();
  if (sizes.train + sizes.dev + sizes.test > n)
    throw ConfigError("split sizes " + std::to_string(sizes.train) + "+" + std::to_string(sizes.dev) + "+" +
                      std::to_string(sizes.test) + " exceed the " + std::to_string(n) + " records");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(idx.begin(), idx.end());
  auto take = [&](std::size_t from, std::size_t to) {
    std::vector<std::size_t> part(idx.begin() + static_cast<long>(from), idx.begin() + static_cast<long>(to));
    std::sort(part.begin(), part.end());
    Manifest out;
    out.provenance = m.provenance;
    for (auto i : part) out.records.push_back(m.records[i]);
    return out;
  };
  SplitResult r;
  r.dev = take(0, sizes.dev);
  r.test = take(sizes.dev, sizes.dev + sizes.test);
  r.train = take(sizes.dev + sizes.test, n);
  return r;
}

}  // namespace foundtts
