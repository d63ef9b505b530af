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
#ifndef WLPCA_TRAINER_HPP_
#define WLPCA_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wlpca/cooc.hpp"
#include "wlpca/model.hpp"
#include "wlpca/objective.hpp"
#include "wlpca/sampler.hpp"

namespace wlpca {

enum class TrainMode { stochastic_adagrad, full_batch };

std::string_view to_string(TrainMode mode);
// "sgd", "stochastic", "adagrad" or "full-batch"/"full_batch".
TrainMode parse_train_mode(std::string_view name);

struct ZeroCellPolicy {
  enum class Kind { all, sampled };

  Kind kind = Kind::sampled;
  // Sampling rate in (0, 1]. Unset means default_zero_rate().
  std::optional<double> rate;

  static ZeroCellPolicy all_cells() { return {Kind::all, 1.0}; }
  static ZeroCellPolicy sampled(double r) { return {Kind::sampled, r}; }
  static ZeroCellPolicy automatic() { return {Kind::sampled, std::nullopt}; }
};

struct TrainConfig {
  ObjectiveKind objective = ObjectiveKind::sgns_logistic;
  double k = 5.0;
  std::size_t dimension = 50;
  std::size_t epochs = 15;
  double learning_rate = 0.05;
  double adagrad_epsilon = 1e-8;
  ZeroCellPolicy zero_cells = ZeroCellPolicy::automatic();
  std::uint64_t seed = 1;
  TrainMode mode = TrainMode::stochastic_adagrad;
  double init_scale = 1.0;
  // Context smoothing exponent for P_D(c).
  double alpha = 1.0;
  GloveWeighting glove;
  bool glove_biases = false;
  // 1 is bit-reproducible. More threads update the shared model without
  // locks and are not reproducible.
  std::size_t threads = 1;
  // |theta| beyond this is clamped before the gradient is taken.
  double theta_clamp = 50.0;
  // Objective reports are exact when the valid cell count is at most this,
  // otherwise estimated from a fixed sample of this many zero cells.
  std::uint64_t exact_objective_cells = 1'000'000;

  // Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;
  // In the objective's own sign convention (see objective.hpp).
  double objective = 0.0;
  bool objective_exact = true;
  // Full-batch: norm of the exact gradient used for the step.
  // Stochastic: root mean square of the per-cell parameter gradient norms.
  double grad_norm = 0.0;
  std::uint64_t nonzero_cells_visited = 0;
  std::uint64_t zero_cells_visited = 0;
  std::uint64_t clamp_events = 0;
  double seconds = 0.0;
};

struct TrainReport {
  ObjectiveKind objective = ObjectiveKind::sgns_logistic;
  double initial_objective = 0.0;
  std::vector<EpochStats> epochs;
  double zero_cell_rate = 1.0;
  double wall_seconds = 0.0;

  std::uint64_t total_clamp_events() const;
  std::uint64_t total_zero_cells_visited() const;
};

struct TrainResult {
  EmbeddingModel model;
  TrainReport report;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Initializes a model from config.seed and trains it.
TrainResult train(const CoocStats& stats, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

// Continues training an existing model in place. Throws
// std::invalid_argument on dimension mismatch and NonFiniteLoss (naming the
// cell) if training produces a non-finite value.
TrainReport train(const CoocStats& stats, const TrainConfig& config,
                  EmbeddingModel& model, const EpochCallback& on_epoch = {});

// Objective of config.objective over the whole matrix: maximized for SGNS,
// minimized for SGNS-LS and GloVe.
double total_objective(const CoocStats& stats, const ContextDistribution& dist,
                       const TrainConfig& config,
                       const EmbeddingModel& model);

// Gradient of the minimized loss (negated log likelihood for SGNS) w.r.t.
// every parameter, flattened as [word matrix, context matrix, word bias,
// context bias]. Only the listed zero cells contribute, each scaled by
// 1 / zero_rate; all nonzero cells contribute with weight 1. Passing every
// zero cell with zero_rate = 1 gives the exact full gradient.
std::vector<double> estimate_gradient(const CoocStats& stats,
                                      const ContextDistribution& dist,
                                      const TrainConfig& config,
                                      const EmbeddingModel& model,
                                      std::span<const Cell> zero_cells,
                                      double zero_rate);

std::vector<double> full_gradient(const CoocStats& stats,
                                  const ContextDistribution& dist,
                                  const TrainConfig& config,
                                  const EmbeddingModel& model);

}  // namespace wlpca

#endif  // WLPCA_TRAINER_HPP_
