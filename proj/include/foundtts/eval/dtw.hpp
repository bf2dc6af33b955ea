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
#include <limits>
#include <utility>
#include <vector>

#include "foundtts/dsp/matrix.hpp"
#include "foundtts/error.hpp"

namespace foundtts {

struct AlignmentPath {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (ref frame, hyp frame)
  double cost = 0.0;                                       // summed frame distances
};

inline double frame_distance(const Matrix<double>& a, std::size_t i, const Matrix<double>& b, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const double d = a(i, k) - b(j, k);
    s += d * d;
  }
  return std::sqrt(s);
}

/// Dynamic time warping with steps (1,1), (1,0), (0,1) and Euclidean frame
/// cost. Equal-cost predecessors are preferred in that order.
inline AlignmentPath dtw_align(const Matrix<double>& ref, const Matrix<double>& hyp) {
  if (ref.rows() == 0 || hyp.rows() == 0) throw InputError("dtw: empty sequence");
  if (ref.cols() != hyp.cols())
    throw InputError("dtw: coefficient dimension mismatch (" + std::to_string(ref.cols()) + " vs " +
                     std::to_string(hyp.cols()) + ")");
  const std::size_t R = ref.rows(), H = hyp.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Matrix<double> acc(R, H);
  Matrix<unsigned char> from(R, H);  // 0 diagonal, 1 ref step, 2 hyp step
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t j = 0; j < H; ++j) {
      const double c = frame_distance(ref, i, hyp, j);
      if (i == 0 && j == 0) {
        acc(i, j) = c;
        continue;
      }
      const double diag = (i > 0 && j > 0) ? acc(i - 1, j - 1) : kInf;
      const double up = i > 0 ? acc(i - 1, j) : kInf;
      const double left = j > 0 ? acc(i, j - 1) : kInf;
      unsigned char best = 0;
      double v = diag;
      if (up < v) {
        v = up;
        best = 1;
      }
      if (left < v) {
        v = left;
        best = 2;
      }
      acc(i, j) = c + v;
      from(i, j) = best;
    }
  }
  AlignmentPath path;
  path.cost = acc(R - 1, H - 1);
  std::size_t i = R - 1, j = H - 1;
  path.pairs.emplace_back(i, j);
  while (i > 0 || j > 0) {
    switch (from(i, j)) {
      case 0: --i, --j; break;
      case 1: --i; break;
      default: --j; break;
    }
    path.pairs.emplace_back(i, j);
  }
  std::reverse(path.pairs.begin(), path.pairs.end());
  return path;
}

}  // namespace foundtts
