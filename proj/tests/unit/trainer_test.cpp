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
#include "wlpca/trainer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <string>

#include "fixtures.hpp"
#include "wlpca/errors.hpp"

namespace wlpca {
namespace {

TrainConfig small_config(ObjectiveKind objective) {
  TrainConfig c;
  c.objective = objective;
  c.k = 2.0;
  c.dimension = 4;
  c.epochs = 5;
  c.seed = 17;
  return c;
}

TEST(TrainConfigTest, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  auto bad = c;
  bad.k = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = c;
  bad.dimension = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = c;
  bad.zero_cells = ZeroCellPolicy::sampled(0.0);
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = c;
  bad.exact_objective_cells = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = c;
  bad.threads = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = c;
  bad.glove_biases = true;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad.objective = ObjectiveKind::glove;
  EXPECT_NO_THROW(bad.validate());
}

TEST(TrainModeTest, Parse) {
  EXPECT_EQ(parse_train_mode("sgd"), TrainMode::stochastic_adagrad);
  EXPECT_EQ(parse_train_mode("full-batch"), TrainMode::full_batch);
  EXPECT_THROW(parse_train_mode("lbfgs"), std::invalid_argument);
}

TEST(TrainTest, FullBatchAbabIsMonotone) {
  const auto s = testing::abab_stats();
  TrainConfig c = small_config(ObjectiveKind::sgns_logistic);
  c.k = 1.0;
  c.dimension = 2;
  c.epochs = 50;
  c.learning_rate = 1e-3;
  c.mode = TrainMode::full_batch;
  const auto r = train(s, c);
  ASSERT_EQ(r.report.epochs.size(), 50u);
  double prev = r.report.initial_objective;
  for (const auto& e : r.report.epochs) {
    EXPECT_GE(e.objective - prev, -1e-12) << "epoch " << e.epoch;
    prev = e.objective;
    EXPECT_EQ(e.zero_cells_visited, 2u);
    EXPECT_TRUE(e.objective_exact);
  }
  EXPECT_GT(prev, r.report.initial_objective);
}

TEST(TrainTest, StochasticRunIsDeterministic) {
  auto rng = derive_rng(51, 0);
  const auto s = testing::random_stats(rng, 30, 0.2, 12);
  for (auto objective : {ObjectiveKind::sgns_logistic, ObjectiveKind::sgns_ls,
                         ObjectiveKind::glove}) {
    auto c = small_config(objective);
    c.zero_cells = ZeroCellPolicy::sampled(0.3);
    const auto a = train(s, c);
    const auto b = train(s, c);
    EXPECT_EQ(a.model, b.model);
    ASSERT_EQ(a.report.epochs.size(), b.report.epochs.size());
    for (std::size_t i = 0; i < a.report.epochs.size(); ++i) {
      EXPECT_EQ(a.report.epochs[i].objective, b.report.epochs[i].objective);
      EXPECT_EQ(a.report.epochs[i].zero_cells_visited,
                b.report.epochs[i].zero_cells_visited);
    }
    c.seed = 18;
    EXPECT_NE(train(s, c).model, a.model);
  }
}

TEST(TrainTest, StochasticSgnsImprovesObjective) {
  auto rng = derive_rng(52, 0);
  const auto s = testing::random_stats(rng, 40, 0.15, 20);
  auto c = small_config(ObjectiveKind::sgns_logistic);
  c.epochs = 30;
  c.dimension = 8;
  const auto r = train(s, c);
  EXPECT_GT(r.report.epochs.back().objective, r.report.initial_objective);
  auto ls = small_config(ObjectiveKind::sgns_ls);
  ls.epochs = 30;
  ls.dimension = 8;
  ls.learning_rate = 0.02;
  const auto r2 = train(s, ls);
  EXPECT_LT(r2.report.epochs.back().objective, r2.report.initial_objective);
}

TEST(TrainTest, GloveNeverVisitsZeroCells) {
  auto rng = derive_rng(53, 0);
  const auto s = testing::random_stats(rng, 25, 0.2, 50);
  for (auto mode : {TrainMode::stochastic_adagrad, TrainMode::full_batch}) {
    for (bool biases : {false, true}) {
      auto c = small_config(ObjectiveKind::glove);
      c.mode = mode;
      c.glove_biases = biases;
      c.learning_rate = mode == TrainMode::full_batch ? 1e-3 : 0.05;
      const auto r = train(s, c);
      EXPECT_EQ(r.report.total_zero_cells_visited(), 0u);
      for (const auto& e : r.report.epochs) {
        EXPECT_EQ(e.nonzero_cells_visited, s.nnz());
      }
      EXPECT_LT(r.report.epochs.back().objective, r.report.initial_objective);
    }
  }
}

TEST(TrainTest, SgnsVisitsSampledZeroCells) {
  auto rng = derive_rng(54, 0);
  const auto s = testing::random_stats(rng, 30, 0.1, 5);
  auto c = small_config(ObjectiveKind::sgns_logistic);
  c.zero_cells = ZeroCellPolicy::all_cells();
  const auto r = train(s, c);
  for (const auto& e : r.report.epochs) {
    EXPECT_EQ(e.zero_cells_visited, 30u * 30u - s.nnz());
  }
  c.zero_cells = ZeroCellPolicy::automatic();
  const auto auto_run = train(s, c);
  EXPECT_DOUBLE_EQ(auto_run.report.zero_cell_rate,
                   default_zero_rate(s, context_distribution(s)));
}

TEST(TrainTest, SaturatedModelRecoversResponses) {
  auto rng = derive_rng(55, 0);
  const auto s = testing::dense_stats(rng, 20, 1, 20);
  TrainConfig c;
  c.k = 1.0;
  c.dimension = 20;
  c.epochs = 3000;
  c.learning_rate = 1e-3;
  c.mode = TrainMode::full_batch;
  c.seed = 3;
  const auto r = train(s, c);
  const auto d = context_distribution(s);
  for (TokenId w = 0; w < 20; ++w) {
    for (TokenId ctx = 0; ctx < 20; ++ctx) {
      const auto cell = cell_problem(s, d, w, ctx, c.k);
      EXPECT_NEAR(sigmoid(r.model.theta(w, ctx)), cell.response, 0.05);
    }
  }
}

TEST(TrainTest, ClampEventsAreCounted) {
  const auto s = testing::abab_stats();
  TrainConfig c;
  c.k = 1.0;
  c.dimension = 1;
  c.epochs = 1;
  c.mode = TrainMode::full_batch;
  c.learning_rate = 1e-6;
  c.theta_clamp = 0.5;
  EmbeddingModel m(2, 2, 1);
  m.word_vectors().fill(1.0);
  m.context_vectors().fill(1.0);
  const auto report = train(s, c, m);
  EXPECT_EQ(report.epochs[0].clamp_events, 4u);
}

TEST(TrainTest, RejectsMismatchedModel) {
  const auto s = testing::abab_stats();
  TrainConfig c;
  c.dimension = 3;
  EmbeddingModel wrong_dim(2, 2, 2);
  EXPECT_THROW(train(s, c, wrong_dim), std::invalid_argument);
  EmbeddingModel wrong_rows(3, 3, 3);
  EXPECT_THROW(train(s, c, wrong_rows), std::invalid_argument);
}

TEST(TrainTest, NonFiniteModelNamesCell) {
  const auto s = testing::abab_stats();
  TrainConfig c;
  c.dimension = 1;
  c.epochs = 1;
  c.zero_cells = ZeroCellPolicy::all_cells();
  EmbeddingModel m(2, 2, 1);
  m.word_vectors()(1, 0) = std::numeric_limits<double>::infinity();
  m.context_vectors().fill(1.0);
  try {
    train(s, c, m);
    FAIL() << "expected NonFiniteLoss";
  } catch (const NonFiniteLoss& e) {
    EXPECT_NE(std::string(e.what()).find("(1, "), std::string::npos) << e.what();
  }
}

// Enumerates every subset of zero cells at rate 0.5; the probability-weighted
// mean of the importance-weighted gradient must equal the full gradient.
TEST(GradientEstimateTest, UnbiasedUnderHalfRateSampling) {
  const auto s = CoocStats::from_counts(
      3, {{0, 1, 2}, {1, 0, 3}, {1, 2, 1}, {2, 2, 4}, {2, 0, 1}});
  const auto d = context_distribution(s);
  auto rng = derive_rng(56, 0);
  const auto model = testing::random_model(rng, 3, 2, 0.8);
  std::vector<Cell> zeros;
  for (TokenId w = 0; w < 3; ++w) {
    for (TokenId c = 0; c < 3; ++c) {
      if (s.count(w, c) == 0) zeros.push_back({w, c});
    }
  }
  ASSERT_EQ(zeros.size(), 4u);
  for (auto objective : {ObjectiveKind::sgns_logistic, ObjectiveKind::sgns_ls}) {
    TrainConfig c;
    c.objective = objective;
    c.k = 2.0;
    c.dimension = 2;
    const auto full = full_gradient(s, d, c, model);
    std::vector<double> expectation(full.size(), 0.0);
    const std::size_t outcomes = std::size_t{1} << zeros.size();
    for (std::size_t mask = 0; mask < outcomes; ++mask) {
      std::vector<Cell> chosen;
      for (std::size_t i = 0; i < zeros.size(); ++i) {
        if (mask & (std::size_t{1} << i)) chosen.push_back(zeros[i]);
      }
      const auto g = estimate_gradient(s, d, c, model, chosen, 0.5);
      const double p = 1.0 / static_cast<double>(outcomes);
      for (std::size_t i = 0; i < g.size(); ++i) expectation[i] += p * g[i];
    }
    for (std::size_t i = 0; i < full.size(); ++i) {
      EXPECT_NEAR(expectation[i], full[i], 1e-12);
    }
  }
}

// The full gradient equals minus the derivative of the summed cell
// objective, checked by central differences over every parameter.
TEST(GradientEstimateTest, FullGradientMatchesFiniteDifferences) {
  auto rng = derive_rng(57, 0);
  const auto s = testing::random_stats(rng, 5, 0.4, 6);
  const auto d = context_distribution(s);
  auto model = testing::random_model(rng, 5, 3, 0.6);
  TrainConfig c;
  c.k = 3.0;
  c.dimension = 3;
  const auto grad = full_gradient(s, d, c, model);
  auto params = model.word_vectors().data();
  const double h = 1e-5;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const double up = sgns_objective(s, d, c.k, model);
    params[i] = saved - h;
    const double down = sgns_objective(s, d, c.k, model);
    params[i] = saved;
    EXPECT_NEAR(grad[i], -(up - down) / (2 * h), 1e-6);
  }
}

TEST(TrainTest, ParallelHogwildStaysReasonable) {
  auto rng = derive_rng(58, 0);
  const auto s = testing::random_stats(rng, 60, 0.1, 20);
  auto c = small_config(ObjectiveKind::sgns_logistic);
  c.epochs = 20;
  c.dimension = 8;
  const auto single = train(s, c);
  c.threads = 4;
  const auto parallel = train(s, c);
  EXPECT_TRUE(parallel.model.all_finite());
  const double gain_single =
      single.report.epochs.back().objective - single.report.initial_objective;
  const double gain_parallel =
      parallel.report.epochs.back().objective - parallel.report.initial_objective;
  EXPECT_GT(gain_parallel, 0.8 * gain_single);
}

TEST(TrainTest, LargeProblemsUseObjectiveSample) {
  auto rng = derive_rng(59, 0);
  const auto s = testing::random_stats(rng, 60, 0.05, 4);
  auto c = small_config(ObjectiveKind::sgns_logistic);
  c.epochs = 2;
  c.exact_objective_cells = 500;
  const auto r = train(s, c);
  EXPECT_FALSE(r.report.epochs[0].objective_exact);
  // The sampled estimate is unbiased; with ~500 of ~3300 zero cells it
  // should land near the exact value.
  const double exact = sgns_objective(s, context_distribution(s), c.k, r.model);
  EXPECT_NEAR(r.report.epochs.back().objective / exact, 1.0, 0.05);
}

}  // namespace
}  // namespace wlpca
