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
#include "wlpca/cooc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wlpca/errors.hpp"

namespace wlpca {

CoocStats CoocStats::from_counts(std::size_t vocab_size,
                                 std::vector<PairCount> counts) {
  for (const auto& p : counts) {
    if (p.word >= vocab_size || p.context >= vocab_size) {
      throw std::invalid_argument("pair id out of range for vocabulary of " +
                                  std::to_string(vocab_size));
    }
  }
  std::sort(counts.begin(), counts.end(),
            [](const PairCount& a, const PairCount& b) {
              return a.word != b.word ? a.word < b.word
                                      : a.context < b.context;
            });

  CoocStats s;
  s.offsets_.assign(vocab_size + 1, 0);
  s.word_marginals_.assign(vocab_size, 0);
  s.context_marginals_.assign(vocab_size, 0);
  for (std::size_t i = 0; i < counts.size();) {
    std::uint64_t n = 0;
    std::size_t j = i;
    while (j < counts.size() && counts[j].word == counts[i].word &&
           counts[j].context == counts[i].context) {
      n += counts[j].count;
      ++j;
    }
    if (n > 0) {
      s.contexts_.push_back(counts[i].context);
      s.counts_.push_back(n);
      ++s.offsets_[counts[i].word + 1];
      s.word_marginals_[counts[i].word] += n;
      s.context_marginals_[counts[i].context] += n;
      s.total_ += n;
    }
    i = j;
  }
  if (s.total_ == 0) throw EmptyCooc("no word-context pairs");
  for (std::size_t w = 0; w < vocab_size; ++w) {
    s.offsets_[w + 1] += s.offsets_[w];
  }
  return s;
}

std::uint64_t CoocStats::count(TokenId word, TokenId context) const {
  const auto ctx = row_contexts(word);
  const auto it = std::lower_bound(ctx.begin(), ctx.end(), context);
  if (it == ctx.end() || *it != context) return 0;
  return counts_[offsets_[word] + static_cast<std::size_t>(it - ctx.begin())];
}

std::span<const TokenId> CoocStats::row_contexts(TokenId word) const {
  if (word >= vocab_size()) throw std::out_of_range("word id out of range");
  return std::span<const TokenId>(contexts_).subspan(
      offsets_[word], offsets_[word + 1] - offsets_[word]);
}

std::span<const std::uint64_t> CoocStats::row_counts(TokenId word) const {
  if (word >= vocab_size()) throw std::out_of_range("word id out of range");
  return std::span<const std::uint64_t>(counts_).subspan(
      offsets_[word], offsets_[word + 1] - offsets_[word]);
}

std::vector<PairCount> CoocStats::to_pairs() const {
  std::vector<PairCount> out;
  out.reserve(nnz());
  for (std::size_t w = 0; w < vocab_size(); ++w) {
    for (std::size_t i = offsets_[w]; i < offsets_[w + 1]; ++i) {
      out.push_back({static_cast<TokenId>(w), contexts_[i], counts_[i]});
    }
  }
  return out;
}

CoocStats from_pairs(const PairStream& pairs) {
  if (pairs.empty()) throw EmptyCooc("pair stream is empty");
  return CoocStats::from_counts(pairs.vocab_size, pairs.pairs);
}

ContextDistribution context_distribution(const CoocStats& stats,
                                         double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("smoothing exponent must be positive");
  }
  const auto marg = stats.context_marginals();
  ContextDistribution dist;
  dist.alpha = alpha;
  dist.probs.assign(marg.size(), 0.0);
  if (alpha == 1.0) {
    if (stats.total() == 0) throw EmptyCooc("all context marginals are zero");
    const auto total = static_cast<double>(stats.total());
    for (std::size_t c = 0; c < marg.size(); ++c) {
      dist.probs[c] = static_cast<double>(marg[c]) / total;
    }
    return dist;
  }
  double norm = 0.0;
  for (std::size_t c = 0; c < marg.size(); ++c) {
    if (marg[c] > 0) {
      dist.probs[c] = std::pow(static_cast<double>(marg[c]), alpha);
      norm += dist.probs[c];
    }
  }
  if (norm == 0.0) throw EmptyCooc("all context marginals are zero");
  for (auto& p : dist.probs) p /= norm;
  return dist;
}

bool is_degenerate(const CoocStats& stats, const ContextDistribution& dist,
                   TokenId word, TokenId context) {
  return stats.word_marginal(word) == 0 || dist(context) <= 0.0;
}

CellProblem cell_problem(const CoocStats& stats,
                         const ContextDistribution& dist, TokenId word,
                         TokenId context, double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("k must be a finite non-negative number");
  }
  if (is_degenerate(stats, dist, word, context)) {
    throw DegenerateCell("cell (" + std::to_string(word) + ", " +
                         std::to_string(context) +
                         ") has n_w = 0 or P_D(c) = 0");
  }
  return make_cell(word, context, stats.count(word, context),
                   stats.word_marginal(word), dist(context), k);
}

double ExtendedReal::value() const {
  if (neg_inf_) throw std::logic_error("ExtendedReal holds -infinity");
  return value_;
}

ExtendedReal pmi(const CoocStats& stats, TokenId word, TokenId context) {
  const auto nw = stats.word_marginal(word);
  const auto nc = stats.context_marginal(context);
  if (nw == 0 || nc == 0) {
    throw DegenerateCell("PMI undefined for zero marginal at (" +
                         std::to_string(word) + ", " +
                         std::to_string(context) + ")");
  }
  const auto n = stats.count(word, context);
  if (n == 0) return ExtendedReal::negative_infinity();
  return ExtendedReal(std::log(static_cast<double>(n) *
                               static_cast<double>(stats.total()) /
                               (static_cast<double>(nw) *
                                static_cast<double>(nc))));
}

ExtendedReal cell_logit(const CellProblem& cell) {
  if (cell.raw_count == 0) return ExtendedReal::negative_infinity();
  // 1 - x = negative_mass / weight, taken directly to avoid cancellation.
  const double x = cell.response;
  const double one_minus_x = cell.negative_mass / cell.weight;
  return ExtendedReal(std::log(x / one_minus_x));
}

ShiftedPmiMatrix::ShiftedPmiMatrix(const CoocStats& stats,
                                   std::vector<double> values, double k,
                                   double alpha)
    : offsets_(stats.offsets().begin(), stats.offsets().end()),
      contexts_(stats.contexts().begin(), stats.contexts().end()),
      values_(std::move(values)),
      k_(k),
      alpha_(alpha) {
  if (values_.size() != contexts_.size()) {
    throw std::invalid_argument("one value per nonzero cell required");
  }
}

ExtendedReal ShiftedPmiMatrix::at(TokenId word, TokenId context) const {
  if (word >= vocab_size() || context >= vocab_size()) {
    throw std::out_of_range("cell id out of range");
  }
  const auto first = contexts_.begin() + static_cast<std::ptrdiff_t>(offsets_[word]);
  const auto last = contexts_.begin() + static_cast<std::ptrdiff_t>(offsets_[word + 1]);
  const auto it = std::lower_bound(first, last, context);
  if (it == last || *it != context) return ExtendedReal::negative_infinity();
  return ExtendedReal(values_[static_cast<std::size_t>(it - contexts_.begin())]);
}

ShiftedPmiMatrix shifted_pmi_matrix(const CoocStats& stats,
                                    const ContextDistribution& dist,
                                    double k) {
  if (!(k >= 1.0)) throw std::invalid_argument("shifted PMI requires k >= 1");
  std::vector<double> values;
  values.reserve(stats.nnz());
  for (std::size_t w = 0; w < stats.vocab_size(); ++w) {
    for (auto c : stats.row_contexts(static_cast<TokenId>(w))) {
      const auto cell = cell_problem(stats, dist, static_cast<TokenId>(w), c, k);
      values.push_back(cell_logit(cell).value());
    }
  }
  return ShiftedPmiMatrix(stats, std::move(values), k, dist.alpha);
}

}  // namespace wlpca
