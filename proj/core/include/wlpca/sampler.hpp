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
#ifndef WLPCA_SAMPLER_HPP_
#define WLPCA_SAMPLER_HPP_

#include <cstdint>
#include <vector>

#include "wlpca/cooc.hpp"

namespace wlpca {

struct Cell {
  TokenId word = 0;
  TokenId context = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Draws zero cells (n_{w,c} = 0, non-degenerate) for one epoch. Each such
// cell is included independently with probability rate; output is in
// row-major order and depends only on (seed, epoch). Borrows stats, which
// must outlive the sampler.
class ZeroCellSampler {
 public:
  ZeroCellSampler(const CoocStats& stats, const ContextDistribution& dist,
                  std::uint64_t seed, double rate);

  double rate() const { return rate_; }
  // Number of non-degenerate zero cells in the matrix.
  std::uint64_t population() const { return population_; }

  std::vector<Cell> sample(std::uint64_t epoch) const;

 private:
  bool is_nonzero(TokenId word, TokenId context) const;

  const CoocStats* stats_;
  std::vector<TokenId> words_;
  std::vector<TokenId> contexts_;
  std::uint64_t seed_;
  double rate_;
  std::uint64_t population_ = 0;
};

// min(1, 10 * nnz / zero_cells): zero-cell work about ten times the
// nonzero work. Returns 1 when there are no zero cells.
double default_zero_rate(const CoocStats& stats,
                         const ContextDistribution& dist);

}  // namespace wlpca

#endif  // WLPCA_SAMPLER_HPP_
