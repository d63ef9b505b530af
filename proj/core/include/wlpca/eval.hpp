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
#ifndef WLPCA_EVAL_HPP_
#define WLPCA_EVAL_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "wlpca/cooc.hpp"
#include "wlpca/corpus.hpp"
#include "wlpca/model.hpp"
#include "wlpca/objective.hpp"

namespace wlpca {

struct IdentityReport {
  // max |logit(x_{w,c}) - (PMI(w,c) - log k)| over nonzero cells
  double max_deviation = 0.0;
  std::uint64_t cells_checked = 0;
};

// Requires dist.alpha == 1; throws std::invalid_argument otherwise.
IdentityReport check_logit_identity(const CoocStats& stats,
                                    const ContextDistribution& dist,
                                    double k);

struct GradientCheckOptions {
  double step = 1e-5;
  // Cells whose analytic and numeric gradient norms are both below this
  // are compared absolutely instead of relatively.
  double zero_threshold = 1e-6;
  bool glove_biases = false;
  // Place every cell at its per-cell optimum so the true gradient is zero:
  // x = sigma(theta) for SGNS, x = theta for SGNS-LS, theta = log n for
  // GloVe.
  bool stationary = false;
};

struct GradientCheckReport {
  // max over cells of |analytic - numeric|_2 / max(|analytic|_2,
  // |numeric|_2), for cells above the zero threshold
  double max_relative_error = 0.0;
  // max componentwise |analytic - numeric| over cells below it
  double max_absolute_error_near_zero = 0.0;
  std::uint64_t cells_relative = 0;
  std::uint64_t cells_near_zero = 0;
  std::uint64_t components_checked = 0;
};

// Draws n_cells random cells (f in [1, 8], entries in [-0.5, 0.5]) and
// compares each analytic CellGrad against central differences of the
// corresponding cell objective, bias partials included when enabled.
GradientCheckReport finite_difference_check(
    ObjectiveKind kind, std::size_t n_cells, std::uint64_t seed,
    const GradientCheckOptions& options = {});

enum class VectorSpace { word, context, averaged };

std::string_view to_string(VectorSpace space);
VectorSpace parse_vector_space(std::string_view name);

// Representation of one id: its word row, its context row, or their mean.
std::vector<double> representation(const EmbeddingModel& model, TokenId id,
                                   VectorSpace space);

// Cosine similarity. Throws UndefinedSimilarity for a zero vector and
// std::out_of_range for bad ids.
double similarity(const EmbeddingModel& model, TokenId a, TokenId b,
                  VectorSpace space = VectorSpace::word);

// Descending similarity, excluding the query; ties by ascending id.
// Candidates with zero vectors are skipped.
std::vector<std::pair<TokenId, double>> nearest_neighbors(
    const EmbeddingModel& model, TokenId query, std::size_t top_n,
    VectorSpace space = VectorSpace::word);

enum class ExportFormat { text, checkpoint };

// text: "vocab_size f" header, then "token v1 ... vf" per id with 6
// significant digits. checkpoint: the LXM1 binary format. Tokens can never
// contain whitespace (Vocabulary rejects them).
void write_embeddings_text(const EmbeddingModel& model, const Vocabulary& vocab,
                           std::ostream& out,
                           VectorSpace space = VectorSpace::word);
void export_embeddings(const EmbeddingModel& model, const Vocabulary& vocab,
                       const std::filesystem::path& path, ExportFormat format,
                       VectorSpace space = VectorSpace::word);

}  // namespace wlpca

#endif  // WLPCA_EVAL_HPP_
