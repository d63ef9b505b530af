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
#include "wlpca/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cell_walk.hpp"

namespace wlpca {
namespace {

void check_response(double x, double weight) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("response must lie in [0, 1], got " +
                                std::to_string(x));
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("weight must be finite and non-negative");
  }
}

void check_dims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("word and context vectors differ in size");
  }
}

CellGrad scale_pair(double g, std::span<const double> v_w,
                    std::span<const double> v_c) {
  CellGrad grad;
  grad.d_word.resize(v_w.size());
  grad.d_context.resize(v_c.size());
  for (std::size_t i = 0; i < v_w.size(); ++i) {
    grad.d_word[i] = g * v_c[i];
    grad.d_context[i] = g * v_w[i];
  }
  return grad;
}

void check_model(const CoocStats& stats, const EmbeddingModel& model) {
  if (model.word_count() != stats.vocab_size() ||
      model.context_count() != stats.vocab_size()) {
    throw std::invalid_argument("model size does not match vocabulary");
  }
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::sgns_logistic: return "sgns";
    case ObjectiveKind::sgns_ls: return "sgns-ls";
    case ObjectiveKind::glove: return "glove";
  }
  return "unknown";
}

ObjectiveKind parse_objective(std::string_view name) {
  if (name == "sgns" || name == "sgns-logistic" || name == "sgns_logistic") {
    return ObjectiveKind::sgns_logistic;
  }
  if (name == "sgns-ls" || name == "sgns_ls") return ObjectiveKind::sgns_ls;
  if (name == "glove") return ObjectiveKind::glove;
  throw std::invalid_argument("unknown objective: " + std::string(name));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sgns_cell_objective(double x, double weight, double theta) {
  check_response(x, weight);
  if (theta > 0.0) {
    return weight * (theta * (x - 1.0) - std::log1p(std::exp(-theta)));
  }
  return weight * (x * theta - std::log1p(std::exp(theta)));
}

double sgns_theta_gradient(double x, double weight, double theta) {
  return weight * (x - sigmoid(theta));
}

CellGrad sgns_cell_grad(double x, double weight, std::span<const double> v_w,
                        std::span<const double> v_c) {
  check_response(x, weight);
  check_dims(v_w, v_c);
  const double theta = dot(v_w, v_c);
  auto grad = scale_pair(sgns_theta_gradient(x, weight, theta), v_w, v_c);
  grad.loss_contribution = sgns_cell_objective(x, weight, theta);
  return grad;
}

double sgns_ls_cell_objective(double x, double weight, double theta) {
  check_response(x, weight);
  const double r = x - theta;
  return weight * r * r;
}

double sgns_ls_theta_gradient(double x, double weight, double theta) {
  return -2.0 * weight * (x - theta);
}

CellGrad sgns_ls_cell_grad(double x, double weight,
                           std::span<const double> v_w,
                           std::span<const double> v_c) {
  check_response(x, weight);
  check_dims(v_w, v_c);
  const double theta = dot(v_w, v_c);
  auto grad = scale_pair(sgns_ls_theta_gradient(x, weight, theta), v_w, v_c);
  grad.loss_contribution = sgns_ls_cell_objective(x, weight, theta);
  return grad;
}

double glove_weight(double count, const GloveWeighting& params) {
  return count >= params.x_max ? 1.0 : std::pow(count / params.x_max, params.alpha);
}

double glove_cell_objective(double count, double theta,
                            const GloveWeighting& params) {
  if (!(count >= 1.0)) {
    throw std::invalid_argument("GloVe cells need a positive count");
  }
  const double r = std::log(count) - theta;
  return glove_weight(count, params) * r * r;
}

double glove_theta_gradient(double count, double theta,
                            const GloveWeighting& params) {
  return -2.0 * glove_weight(count, params) * (std::log(count) - theta);
}

CellGrad glove_cell_grad(double count, std::span<const double> v_w,
                         std::span<const double> v_c, double b_w, double b_c,
                         const GloveWeighting& params) {
  check_dims(v_w, v_c);
  const double theta = dot(v_w, v_c) + b_w + b_c;
  const double loss = glove_cell_objective(count, theta, params);
  const double g = glove_theta_gradient(count, theta, params);
  auto grad = scale_pair(g, v_w, v_c);
  grad.d_word_bias = g;
  grad.d_context_bias = g;
  grad.loss_contribution = loss;
  return grad;
}

double levy_goldberg_objective(const CoocStats& stats,
                               const ContextDistribution& dist, double k,
                               const EmbeddingModel& model) {
  check_model(stats, model);
  const auto vocab = stats.vocab_size();
  double total = 0.0;
  for (std::size_t w = 0; w < vocab; ++w) {
    const auto ctx = stats.row_contexts(static_cast<TokenId>(w));
    if (ctx.empty()) continue;
    // E_{c' ~ P_D}[log sigma(-v_w . v_c')], summed exactly.
    double expectation = 0.0;
    for (std::size_t c = 0; c < vocab; ++c) {
      if (dist.probs[c] > 0.0) {
        expectation += dist.probs[c] * log_sigmoid(-model.theta(w, c));
      }
    }
    const auto cnt = stats.row_counts(static_cast<TokenId>(w));
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const double n = static_cast<double>(cnt[i]);
      total += n * (log_sigmoid(model.theta(w, ctx[i])) + k * expectation);
    }
  }
  return total;
}

double sgns_objective(const CoocStats& stats, const ContextDistribution& dist,
                      double k, const EmbeddingModel& model) {
  check_model(stats, model);
  double total = 0.0;
  detail::for_each_valid_cell(stats, dist, k,
                              [&](const CellProblem& cell, std::size_t) {
                                if (cell.weight == 0.0) return;
                                total += sgns_cell_objective(
                                    cell.response, cell.weight,
                                    model.theta(cell.word, cell.context));
                              });
  return total;
}

double sgns_ls_objective(const CoocStats& stats,
                         const ContextDistribution& dist, double k,
                         const EmbeddingModel& model) {
  check_model(stats, model);
  double total = 0.0;
  detail::for_each_valid_cell(stats, dist, k,
                              [&](const CellProblem& cell, std::size_t) {
                                if (cell.weight == 0.0) return;
                                total += sgns_ls_cell_objective(
                                    cell.response, cell.weight,
                                    model.theta(cell.word, cell.context));
                              });
  return total;
}

double glove_objective(const CoocStats& stats, const EmbeddingModel& model,
                       const GloveWeighting& params) {
  check_model(stats, model);
  double total = 0.0;
  for (const auto& p : stats.to_pairs()) {
    double theta = model.theta(p.word, p.context);
    if (model.has_biases()) {
      theta += model.word_bias()[p.word] + model.context_bias()[p.context];
    }
    total += glove_cell_objective(static_cast<double>(p.count), theta, params);
  }
  return total;
}

}  // namespace wlpca
