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
#include <span>
#include <vector>

#include "foundtts/error.hpp"

namespace foundtts {

using Vec = std::vector<double>;

enum class DistanceKind { kCosine, kSquaredEuclidean };

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void require_same_dim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw InputError("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

/// 1 - cos(a, b), clamped to [0, 2].
inline double cosine_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  const double na = norm(a), nb = norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw InputError("cosine distance of a zero-norm vector");
  const double d = 1.0 - dot(a, b) / (na * nb);
  return d < 0.0 ? 0.0 : (d > 2.0 ? 2.0 : d);
}

inline double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline double distance(DistanceKind k, std::span<const double> a, std::span<const double> b) {
  return k == DistanceKind::kCosine ? cosine_distance(a, b) : squared_euclidean(a, b);
}

/// Gradients of d(a, b) with respect to a and b, accumulated with weight w.
inline void distance_gradient(DistanceKind k, std::span<const double> a, std::span<const double> b, double w,
                              std::span<double> ga, std::span<double> gb) {
  if (k == DistanceKind::kSquaredEuclidean) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double g = 2.0 * (a[i] - b[i]) * w;
      ga[i] += g;
      gb[i] -= g;
    }
    return;
  }
  const double na = norm(a), nb = norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw InputError("cosine distance of a zero-norm vector");
  const double c = dot(a, b) / (na * nb);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ga[i] -= w * (b[i] / (na * nb) - c * a[i] / (na * na));
    gb[i] -= w * (a[i] / (na * nb) - c * b[i] / (nb * nb));
  }
}

/// max(0, d(anchor, positive) - d(anchor, negative) + margin)
inline double triplet_loss(std::span<const double> anchor, std::span<const double> positive,
                           std::span<const double> negative, double margin,
                           DistanceKind k = DistanceKind::kCosine) {
  if (margin < 0.0) throw ConfigError("triplet margin must be >= 0");
  const double v = distance(k, anchor, positive) - distance(k, anchor, negative) + margin;
  return v > 0.0 ? v : 0.0;
}

}  // namespace foundtts
