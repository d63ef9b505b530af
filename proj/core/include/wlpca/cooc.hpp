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
#ifndef WLPCA_COOC_HPP_
#define WLPCA_COOC_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "wlpca/corpus.hpp"

namespace wlpca {

// Sparse word-context counts n_{w,c} in compressed-row form, with the
// marginals n_w, n_c and the pair total |D|. Immutable after construction.
class CoocStats {
 public:
  CoocStats() = default;

  // Aggregates duplicates and drops zero counts. Throws EmptyCooc when no
  // positive count remains and std::invalid_argument for out-of-range ids.
  static CoocStats from_counts(std::size_t vocab_size,
                               std::vector<PairCount> counts);

  std::size_t vocab_size() const { return word_marginals_.size(); }
  std::size_t nnz() const { return contexts_.size(); }
  std::uint64_t total() const { return total_; }

  std::uint64_t count(TokenId word, TokenId context) const;
  std::uint64_t word_marginal(TokenId word) const {
    return word_marginals_.at(word);
  }
  std::uint64_t context_marginal(TokenId context) const {
    return context_marginals_.at(context);
  }
  std::span<const std::uint64_t> word_marginals() const {
    return word_marginals_;
  }
  std::span<const std::uint64_t> context_marginals() const {
    return context_marginals_;
  }

  // Row w occupies entries [row_begin(w), row_begin(w + 1)).
  std::size_t row_begin(TokenId word) const { return offsets_[word]; }
  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const TokenId> contexts() const { return contexts_; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  std::span<const TokenId> row_contexts(TokenId word) const;
  std::span<const std::uint64_t> row_counts(TokenId word) const;

  std::vector<PairCount> to_pairs() const;

  friend bool operator==(const CoocStats&, const CoocStats&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<TokenId> contexts_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> word_marginals_;
  std::vector<std::uint64_t> context_marginals_;
  std::uint64_t total_ = 0;
};

// Throws EmptyCooc on an empty stream.
CoocStats from_pairs(const PairStream& pairs);

// P_D(c) proportional to n_c^alpha.
struct ContextDistribution {
  std::vector<double> probs;
  double alpha = 1.0;

  double operator()(TokenId context) const { return probs.at(context); }
};

// alpha = 1 gives n_c / |D| exactly. Throws std::invalid_argument for
// alpha <= 0 and EmptyCooc when every n_c is zero.
ContextDistribution context_distribution(const CoocStats& stats,
                                         double alpha = 1.0);

// One binomial cell of the weighted logistic PCA view.
struct CellProblem {
  TokenId word = 0;
  TokenId context = 0;
  std::uint64_t raw_count = 0;
  // k * n_w * P_D(c): the expected negative mass for this cell.
  double negative_mass = 0.0;
  // raw_count + negative_mass
  double weight = 0.0;
  // raw_count / weight
  double response = 0.0;
};

// A cell is degenerate when n_w = 0 or P_D(c) = 0.
bool is_degenerate(const CoocStats& stats, const ContextDistribution& dist,
                   TokenId word, TokenId context);

// Builds a cell from raw quantities without validation. Callers that walk
// the matrix row by row use this to avoid per-cell lookups.
inline CellProblem make_cell(TokenId word, TokenId context,
                             std::uint64_t raw_count,
                             std::uint64_t word_marginal, double context_prob,
                             double k) {
  CellProblem cell;
  cell.word = word;
  cell.context = context;
  cell.raw_count = raw_count;
  cell.negative_mass = k * static_cast<double>(word_marginal) * context_prob;
  cell.weight = static_cast<double>(raw_count) + cell.negative_mass;
  cell.response =
      cell.weight > 0.0 ? static_cast<double>(raw_count) / cell.weight : 0.0;
  return cell;
}

// Throws DegenerateCell for degenerate cells and std::invalid_argument for
// k < 0 or non-finite k.
CellProblem cell_problem(const CoocStats& stats,
                         const ContextDistribution& dist, TokenId word,
                         TokenId context, double k);

// A real number or negative infinity, held as an explicit flag so that
// reductions never see NaN.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double value) : value_(value) {}

  static constexpr ExtendedReal negative_infinity() {
    ExtendedReal r;
    r.neg_inf_ = true;
    return r;
  }

  constexpr bool is_negative_infinity() const { return neg_inf_; }
  constexpr bool is_finite() const { return !neg_inf_; }
  // Throws std::logic_error on the -infinity sentinel.
  double value() const;
  // -infinity maps to -std::numeric_limits<double>::infinity().
  constexpr double to_double() const {
    return neg_inf_ ? -std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr bool operator==(const ExtendedReal&,
                                   const ExtendedReal&) = default;

 private:
  double value_ = 0.0;
  bool neg_inf_ = false;
};

// log(n_{w,c} |D| / (n_w n_c)); -infinity sentinel when n_{w,c} = 0.
// Throws DegenerateCell if n_w or n_c is zero.
ExtendedReal pmi(const CoocStats& stats, TokenId word, TokenId context);

// log(x / (1 - x)) for one cell, -infinity when x = 0.
ExtendedReal cell_logit(const CellProblem& cell);

// Logit targets aligned with the nonzero entries of the source stats. Every
// absent cell is the -infinity sentinel. With alpha = 1 each stored value
// equals pmi(w, c) - log k; for other alpha the smoothed P_D(c) replaces
// n_c / |D| in that expression.
class ShiftedPmiMatrix {
 public:
  ShiftedPmiMatrix(const CoocStats& stats, std::vector<double> values,
                   double k, double alpha);

  std::size_t vocab_size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  ExtendedReal at(TokenId word, TokenId context) const;
  std::span<const double> values() const { return values_; }
  double k() const { return k_; }
  double alpha() const { return alpha_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<TokenId> contexts_;
  std::vector<double> values_;
  double k_;
  double alpha_;
};

// Requires k >= 1.
ShiftedPmiMatrix shifted_pmi_matrix(const CoocStats& stats,
                                    const ContextDistribution& dist,
                                    double k);

// Binary format, little-endian:
//   "LXF1", u32 vocab_size, u64 nnz, u64 |D|,
//   nnz x (u32 word_id, u32 context_id, u64 count) sorted by (word, context).
// The loader recomputes marginals and checks them against |D|.
void save_cooc(const CoocStats& stats, std::ostream& out);
CoocStats load_cooc(std::istream& in);
CoocStats load_cooc(const std::filesystem::path& path);

// Debug TSV: word<TAB>context<TAB>count with token strings.
void save_cooc_tsv(const CoocStats& stats, const Vocabulary& vocab,
                   std::ostream& out);
CoocStats load_cooc_tsv(std::istream& in, const Vocabulary& vocab);

}  // namespace wlpca

#endif  // WLPCA_COOC_HPP_
