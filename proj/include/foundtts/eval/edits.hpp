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
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace foundtts {

enum class EditOp { kMatch, kSubstitution, kDeletion, kInsertion };

struct EditOps {
  std::size_t matches = 0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::vector<EditOp> ops;  // alignment in reference order

  std::size_t distance() const { return substitutions + insertions + deletions; }
};

/// Minimum edit distance alignment with unit costs. Among optimal alignments
/// the backtrace prefers match, then substitution, deletion, insertion.
inline EditOps edit_alignment(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const std::size_t R = ref.size(), H = hyp.size();
  std::vector<std::size_t> d((R + 1) * (H + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (H + 1) + j]; };
  for (std::size_t i = 0; i <= R; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= H; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= R; ++i)
    for (std::size_t j = 1; j <= H; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1), at(i - 1, j) + 1, at(i, j - 1) + 1});

  EditOps e;
  std::size_t i = R, j = H;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && at(i, j) == at(i - 1, j - 1)) {
      e.ops.push_back(EditOp::kMatch);
      ++e.matches, --i, --j;
    } else if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + 1) {
      e.ops.push_back(EditOp::kSubstitution);
      ++e.substitutions, --i, --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      e.ops.push_back(EditOp::kDeletion);
      ++e.deletions, --i;
    } else {
      e.ops.push_back(EditOp::kInsertion);
      ++e.insertions, --j;
    }
  }
  std::reverse(e.ops.begin(), e.ops.end());
  return e;
}

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace foundtts
