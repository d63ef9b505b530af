// Copyright 2026 The wlpca Authors
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
#ifndef WLPCA_SRC_CELL_WALK_HPP_
#define WLPCA_SRC_CELL_WALK_HPP_

#include "wlpca/cooc.hpp"

namespace wlpca::detail {

// Visits every non-degenerate cell in row-major order, zero cells
// included. fn(const CellProblem&, std::size_t nz_index) where nz_index is
// the CSR position for nonzero cells and npos otherwise.
template <typename Fn>
void for_each_valid_cell(const CoocStats& stats,
                         const ContextDistribution& dist, double k, Fn&& fn) {
  constexpr auto npos = static_cast<std::size_t>(-1);
  const auto vocab = stats.vocab_size();
  const auto offsets = stats.offsets();
  const auto contexts = stats.contexts();
  const auto counts = stats.counts();
  for (std::size_t w = 0; w < vocab; ++w) {
    const auto n_w = stats.word_marginal(static_cast<TokenId>(w));
    if (n_w == 0) continue;
    std::size_t i = offsets[w];
    const std::size_t end = offsets[w + 1];
    for (std::size_t c = 0; c < vocab; ++c) {
      std::uint64_t n = 0;
      std::size_t nz = npos;
      if (i < end && contexts[i] == c) {
        n = counts[i];
        nz = i++;
      }
      const double p = dist.probs[c];
      if (p <= 0.0) continue;
      fn(make_cell(static_cast<TokenId>(w), static_cast<TokenId>(c), n, n_w,
                   p, k),
         nz);
    }
  }
}

}  // namespace wlpca::detail

#endif  // WLPCA_SRC_CELL_WALK_HPP_
