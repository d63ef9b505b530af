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
#include "wlpca/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wlpca/random.hpp"

namespace wlpca {
namespace {
constexpr std::uint64_t kSamplerStream = 0x7a65726f;  // "zero"
}  // namespace

ZeroCellSampler::ZeroCellSampler(const CoocStats& stats,
                                 const ContextDistribution& dist,
                                 std::uint64_t seed, double rate)
    : stats_(&stats), seed_(seed), rate_(rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("zero-cell sampling rate must be in (0, 1]");
  }
  for (std::size_t w = 0; w < stats.vocab_size(); ++w) {
    if (stats.word_marginal(static_cast<TokenId>(w)) > 0) {
      words_.push_back(static_cast<TokenId>(w));
    }
  }
  for (std::size_t c = 0; c < dist.probs.size(); ++c) {
    if (dist.probs[c] > 0.0) contexts_.push_back(static_cast<TokenId>(c));
  }
  population_ = static_cast<std::uint64_t>(words_.size()) * contexts_.size() -
                stats.nnz();
}

bool ZeroCellSampler::is_nonzero(TokenId word, TokenId context) const {
  const auto row = stats_->row_contexts(word);
  return std::binary_search(row.begin(), row.end(), context);
}

std::vector<Cell> ZeroCellSampler::sample(std::uint64_t epoch) const {
  std::vector<Cell> out;
  const std::uint64_t width = contexts_.size();
  const std::uint64_t space = static_cast<std::uint64_t>(words_.size()) * width;
  if (space == 0) return out;

  if (rate_ == 1.0) {
    out.reserve(population_);
    for (auto w : words_) {
      const auto row = stats_->row_contexts(w);
      std::size_t i = 0;
      for (auto c : contexts_) {
        while (i < row.size() && row[i] < c) ++i;
        if (i < row.size() && row[i] == c) continue;
        out.push_back({w, c});
      }
    }
    return out;
  }

  // Bernoulli(rate) over the linear index space, realised by geometric
  // jumps between successes; nonzero cells landed on are dropped.
  auto rng = derive_rng(seed_, kSamplerStream, epoch);
  const double log_q = std::log1p(-rate_);
  out.reserve(static_cast<std::size_t>(
      static_cast<double>(population_) * rate_ * 1.1 + 16));
  std::uint64_t pos = 0;
  while (true) {
    const double u = uniform01(rng);
    const double gap = std::floor(std::log1p(-u) / log_q);
    if (gap >= static_cast<double>(space - pos)) break;
    pos += static_cast<std::uint64_t>(gap);
    const auto w = words_[pos / width];
    const auto c = contexts_[pos % width];
    if (!is_nonzero(w, c)) out.push_back({w, c});
    ++pos;
    if (pos >= space) break;
  }
  return out;
}

double default_zero_rate(const CoocStats& stats,
                         const ContextDistribution& dist) {
  std::uint64_t words = 0, contexts = 0;
  for (auto n : stats.word_marginals()) words += n > 0 ? 1 : 0;
  for (double p : dist.probs) contexts += p > 0.0 ? 1 : 0;
  const auto zeros = words * contexts - stats.nnz();
  if (zeros == 0) return 1.0;
  return std::min(1.0, 10.0 * static_cast<double>(stats.nnz()) /
                           static_cast<double>(zeros));
}

}  // namespace wlpca
