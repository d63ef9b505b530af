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
#include "wlpca/eval.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "wlpca/binary_io.hpp"
#include "wlpca/errors.hpp"
#include "wlpca/random.hpp"

namespace wlpca {
namespace {

constexpr std::uint64_t kGradCheckStream = 0x67726164;  // "grad"

struct RandomCell {
  std::vector<double> v_w;
  std::vector<double> v_c;
  double b_w = 0.0;
  double b_c = 0.0;
  double x = 0.0;
  double weight = 1.0;
  double count = 1.0;
};

RandomCell draw_cell(ObjectiveKind kind, Rng& rng,
                     const GradientCheckOptions& options) {
  RandomCell cell;
  const auto f = 1 + static_cast<std::size_t>(uniform_below(rng, 8));
  cell.v_w.resize(f);
  cell.v_c.resize(f);
  for (auto& v : cell.v_w) v = uniform(rng, -0.5, 0.5);
  for (auto& v : cell.v_c) v = uniform(rng, -0.5, 0.5);
  cell.x = uniform01(rng);
  cell.weight = uniform(rng, 0.1, 1.0);
  cell.count = 1.0 + static_cast<double>(uniform_below(rng, 200));
  const bool biases = kind == ObjectiveKind::glove && options.glove_biases;
  if (biases) {
    cell.b_w = uniform(rng, -0.5, 0.5);
    cell.b_c = uniform(rng, -0.5, 0.5);
  }

  if (options.stationary) {
    // Move v_c along v_w until the cell sits at its optimum. Keeping
    // |v_w|^2 away from zero keeps the shifted entries of moderate size.
    while (dot(cell.v_w, cell.v_w) < 0.1) {
      for (auto& v : cell.v_w) v = uniform(rng, -0.5, 0.5);
    }
    const auto move_to = [&](double target) {
      const double step = (target - dot(cell.v_w, cell.v_c)) / dot(cell.v_w, cell.v_w);
      for (std::size_t i = 0; i < f; ++i) cell.v_c[i] += step * cell.v_w[i];
    };
    switch (kind) {
      case ObjectiveKind::sgns_logistic:
        cell.x = sigmoid(dot(cell.v_w, cell.v_c));
        break;
      case ObjectiveKind::sgns_ls:
        move_to(uniform(rng, 0.05, 0.95));
        cell.x = std::clamp(dot(cell.v_w, cell.v_c), 0.0, 1.0);
        break;
      case ObjectiveKind::glove:
        move_to(std::log(cell.count) - cell.b_w - cell.b_c);
        break;
    }
  }
  return cell;
}

double cell_value(ObjectiveKind kind, const RandomCell& cell,
                  const GloveWeighting& glove) {
  const double theta = dot(cell.v_w, cell.v_c);
  switch (kind) {
    case ObjectiveKind::sgns_logistic:
      return sgns_cell_objective(cell.x, cell.weight, theta);
    case ObjectiveKind::sgns_ls:
      return sgns_ls_cell_objective(cell.x, cell.weight, theta);
    case ObjectiveKind::glove:
      return glove_cell_objective(cell.count, theta + cell.b_w + cell.b_c,
                                  glove);
  }
  return 0.0;
}

CellGrad cell_gradient(ObjectiveKind kind, const RandomCell& cell,
                       const GloveWeighting& glove) {
  switch (kind) {
    case ObjectiveKind::sgns_logistic:
      return sgns_cell_grad(cell.x, cell.weight, cell.v_w, cell.v_c);
    case ObjectiveKind::sgns_ls:
      return sgns_ls_cell_grad(cell.x, cell.weight, cell.v_w, cell.v_c);
    case ObjectiveKind::glove:
      return glove_cell_grad(cell.count, cell.v_w, cell.v_c, cell.b_w,
                             cell.b_c, glove);
  }
  return {};
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

}  // namespace

IdentityReport check_logit_identity(const CoocStats& stats,
                                    const ContextDistribution& dist,
                                    double k) {
  if (dist.alpha != 1.0) {
    throw std::invalid_argument(
        "logit/PMI identity holds only for the unsmoothed context "
        "distribution (alpha = 1)");
  }
  const auto logits = shifted_pmi_matrix(stats, dist, k);
  const double log_k = std::log(k);
  IdentityReport report;
  for (const auto& p : stats.to_pairs()) {
    const double lhs = logits.at(p.word, p.context).value();
    const double rhs = pmi(stats, p.word, p.context).value() - log_k;
    report.max_deviation = std::max(report.max_deviation, std::abs(lhs - rhs));
    ++report.cells_checked;
  }
  return report;
}

GradientCheckReport finite_difference_check(
    ObjectiveKind kind, std::size_t n_cells, std::uint64_t seed,
    const GradientCheckOptions& options) {
  if (n_cells == 0) throw std::invalid_argument("n_cells must be >= 1");
  const GloveWeighting glove;
  const bool biases = kind == ObjectiveKind::glove && options.glove_biases;
  const double h = options.step;
  auto rng = derive_rng(seed, kGradCheckStream);
  GradientCheckReport report;

  for (std::size_t n = 0; n < n_cells; ++n) {
    auto cell = draw_cell(kind, rng, options);
    const auto grad = cell_gradient(kind, cell, glove);

    std::vector<double> analytic;
    analytic.insert(analytic.end(), grad.d_word.begin(), grad.d_word.end());
    analytic.insert(analytic.end(), grad.d_context.begin(),
                    grad.d_context.end());
    if (biases) {
      analytic.push_back(grad.d_word_bias);
      analytic.push_back(grad.d_context_bias);
    }

    std::vector<double*> params;
    for (auto& v : cell.v_w) params.push_back(&v);
    for (auto& v : cell.v_c) params.push_back(&v);
    if (biases) {
      params.push_back(&cell.b_w);
      params.push_back(&cell.b_c);
    }

    std::vector<double> numeric(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = *params[i];
      *params[i] = saved + h;
      const double up = cell_value(kind, cell, glove);
      *params[i] = saved - h;
      const double down = cell_value(kind, cell, glove);
      *params[i] = saved;
      numeric[i] = (up - down) / (2.0 * h);
    }

    std::vector<double> diff(analytic.size());
    double max_abs = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
      diff[i] = analytic[i] - numeric[i];
      max_abs = std::max(max_abs, std::abs(diff[i]));
    }
    const double scale = std::max(norm2(analytic), norm2(numeric));
    if (scale < options.zero_threshold) {
      report.max_absolute_error_near_zero =
          std::max(report.max_absolute_error_near_zero, max_abs);
      ++report.cells_near_zero;
    } else {
      report.max_relative_error =
          std::max(report.max_relative_error, norm2(diff) / scale);
      ++report.cells_relative;
    }
    report.components_checked += diff.size();
  }
  return report;
}

std::string_view to_string(VectorSpace space) {
  switch (space) {
    case VectorSpace::word: return "word";
    case VectorSpace::context: return "context";
    case VectorSpace::averaged: return "averaged";
  }
  return "unknown";
}

VectorSpace parse_vector_space(std::string_view name) {
  if (name == "word") return VectorSpace::word;
  if (name == "context") return VectorSpace::context;
  if (name == "averaged" || name == "average") return VectorSpace::averaged;
  throw std::invalid_argument("unknown vector space: " + std::string(name));
}

std::vector<double> representation(const EmbeddingModel& model, TokenId id,
                                   VectorSpace space) {
  const bool in_words = id < model.word_count();
  const bool in_contexts = id < model.context_count();
  switch (space) {
    case VectorSpace::word:
      if (!in_words) break;
      return {model.word(id).begin(), model.word(id).end()};
    case VectorSpace::context:
      if (!in_contexts) break;
      return {model.context(id).begin(), model.context(id).end()};
    case VectorSpace::averaged: {
      if (!in_words || !in_contexts) break;
      std::vector<double> v(model.dimension());
      for (std::size_t d = 0; d < v.size(); ++d) {
        v[d] = 0.5 * (model.word(id)[d] + model.context(id)[d]);
      }
      return v;
    }
  }
  throw std::out_of_range("id " + std::to_string(id) + " out of range");
}

double similarity(const EmbeddingModel& model, TokenId a, TokenId b,
                  VectorSpace space) {
  const auto va = representation(model, a, space);
  const auto vb = representation(model, b, space);
  const double na = norm2(va);
  const double nb = norm2(vb);
  if (na == 0.0 || nb == 0.0) {
    throw UndefinedSimilarity("cosine similarity of a zero vector (ids " +
                              std::to_string(a) + ", " + std::to_string(b) +
                              ")");
  }
  return std::clamp(dot(va, vb) / (na * nb), -1.0, 1.0);
}

std::vector<std::pair<TokenId, double>> nearest_neighbors(
    const EmbeddingModel& model, TokenId query, std::size_t top_n,
    VectorSpace space) {
  const auto q = representation(model, query, space);
  const double nq = norm2(q);
  if (nq == 0.0) {
    throw UndefinedSimilarity("query " + std::to_string(query) +
                              " has a zero vector");
  }
  const std::size_t n = space == VectorSpace::context ? model.context_count()
                        : space == VectorSpace::word
                            ? model.word_count()
                            : std::min(model.word_count(), model.context_count());
  std::vector<std::pair<TokenId, double>> scored;
  scored.reserve(n);
  for (std::size_t id = 0; id < n; ++id) {
    if (id == query) continue;
    const auto v = representation(model, static_cast<TokenId>(id), space);
    const double nv = norm2(v);
    if (nv == 0.0) continue;
    scored.emplace_back(static_cast<TokenId>(id),
                        std::clamp(dot(q, v) / (nq * nv), -1.0, 1.0));
  }
  const auto keep = std::min(top_n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), [](const auto& a, const auto& b) {
                      return a.second != b.second ? a.second > b.second
                                                  : a.first < b.first;
                    });
  scored.resize(keep);
  return scored;
}

void write_embeddings_text(const EmbeddingModel& model, const Vocabulary& vocab,
                           std::ostream& out, VectorSpace space) {
  if (vocab.size() != model.word_count()) {
    throw std::invalid_argument("vocabulary size does not match model");
  }
  out << vocab.size() << ' ' << model.dimension() << '\n';
  char buf[32];
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    out << vocab.token(static_cast<TokenId>(id));
    for (double v : representation(model, static_cast<TokenId>(id), space)) {
      std::snprintf(buf, sizeof(buf), " %.6g", v);
      out << buf;
    }
    out << '\n';
  }
}

void export_embeddings(const EmbeddingModel& model, const Vocabulary& vocab,
                       const std::filesystem::path& path, ExportFormat format,
                       VectorSpace space) {
  if (vocab.size() != model.word_count()) {
    throw std::invalid_argument("vocabulary size does not match model");
  }
  if (format == ExportFormat::checkpoint) {
    write_file_atomically(path, true, [&](std::ostream& out) {
      save_checkpoint(model, out);
    });
    return;
  }
  write_file_atomically(path, false, [&](std::ostream& out) {
    write_embeddings_text(model, vocab, out, space);
  });
}

}  // namespace wlpca
