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
#ifndef WLPCA_OBJECTIVE_HPP_
#define WLPCA_OBJECTIVE_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "wlpca/cooc.hpp"
#include "wlpca/model.hpp"

namespace wlpca {

// Sign conventions follow the printed objectives:
//   SGNS (weighted logistic PCA) is a log likelihood and is MAXIMIZED.
//   SGNS-LS and GloVe are squared losses and are MINIMIZED.
// Each CellGrad holds the gradient of the function as returned (ascent
// direction for SGNS, descent direction for the least-squares forms).
enum class ObjectiveKind { sgns_logistic, sgns_ls, glove };

std::string_view to_string(ObjectiveKind kind);
// Accepts "sgns", "sgns-logistic", "sgns_logistic", "sgns-ls", "sgns_ls",
// "glove".
ObjectiveKind parse_objective(std::string_view name);

// True when larger values are better.
constexpr bool is_maximized(ObjectiveKind kind) {
  return kind == ObjectiveKind::sgns_logistic;
}

// 1 / (1 + e^-x), evaluated on the branch that cannot overflow.
double sigmoid(double x);
// log(1 + e^x) without overflow for large |x|.
double log1p_exp(double x);
// log sigma(x)
double log_sigmoid(double x);

struct CellGrad {
  std::vector<double> d_word;
  std::vector<double> d_context;
  double d_word_bias = 0.0;
  double d_context_bias = 0.0;
  double loss_contribution = 0.0;
};

// weight * (x * theta - log(1 + e^theta)). Throws std::invalid_argument
// unless 0 <= x <= 1 and weight >= 0.
double sgns_cell_objective(double x, double weight, double theta);
// d/dtheta of sgns_cell_objective: weight * (x - sigma(theta)).
double sgns_theta_gradient(double x, double weight, double theta);
CellGrad sgns_cell_grad(double x, double weight, std::span<const double> v_w,
                        std::span<const double> v_c);

// weight * (x - theta)^2
double sgns_ls_cell_objective(double x, double weight, double theta);
// -2 * weight * (x - theta)
double sgns_ls_theta_gradient(double x, double weight, double theta);
CellGrad sgns_ls_cell_grad(double x, double weight,
                           std::span<const double> v_w,
                           std::span<const double> v_c);

// Weighting f(n) = min(n / x_max, 1)^alpha. Not defined by the objective
// itself; these are the usual GloVe defaults.
struct GloveWeighting {
  double x_max = 100.0;
  double alpha = 0.75;
};

double glove_weight(double count, const GloveWeighting& params);
// f(n) * (log n - theta)^2 where theta already includes any biases.
// Throws std::invalid_argument for count < 1.
double glove_cell_objective(double count, double theta,
                            const GloveWeighting& params);
// -2 f(n) (log n - theta)
double glove_theta_gradient(double count, double theta,
                            const GloveWeighting& params);
// theta = v_w . v_c + b_w + b_c. Bias partials equal the theta derivative.
CellGrad glove_cell_grad(double count, std::span<const double> v_w,
                         std::span<const double> v_c, double b_w, double b_c,
                         const GloveWeighting& params);

// The negative-sampling objective in its original form:
//   sum_{w,c} n_{w,c} (log sigma(v_w.v_c)
//                      + k sum_{c'} P_D(c') log sigma(-v_w.v_{c'}))
// with the expectation over P_D evaluated exactly.
double levy_goldberg_objective(const CoocStats& stats,
                               const ContextDistribution& dist, double k,
                               const EmbeddingModel& model);

// Sum of sgns_cell_objective over every non-degenerate cell of the matrix,
// zero cells included. Zero-weight cells (only possible with k = 0)
// contribute nothing.
double sgns_objective(const CoocStats& stats, const ContextDistribution& dist,
                      double k, const EmbeddingModel& model);

double sgns_ls_objective(const CoocStats& stats,
                         const ContextDistribution& dist, double k,
                         const EmbeddingModel& model);

// Sum over nonzero cells only. Biases are added when the model has them.
double glove_objective(const CoocStats& stats, const EmbeddingModel& model,
                       const GloveWeighting& params = {});

}  // namespace wlpca

#endif  // WLPCA_OBJECTIVE_HPP_
