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
#include <benchmark/benchmark.h>

#include <sstream>
#include <string>
#include <vector>

#include "wlpca/cooc.hpp"
#include "wlpca/corpus.hpp"
#include "wlpca/objective.hpp"
#include "wlpca/random.hpp"
#include "wlpca/trainer.hpp"

namespace {

using namespace wlpca;

std::vector<TokenId> random_ids(std::size_t n, std::size_t vocab) {
  auto rng = derive_rng(1, 0);
  std::vector<TokenId> ids(n);
  for (auto& id : ids) id = static_cast<TokenId>(uniform_below(rng, vocab));
  return ids;
}

std::string random_text(std::size_t tokens, std::size_t vocab) {
  auto rng = derive_rng(2, 0);
  std::ostringstream out;
  for (std::size_t i = 0; i < tokens; ++i) out << 'w' << uniform_below(rng, vocab) << ' ';
  return out.str();
}

void BM_Tokenize(benchmark::State& state) {
  const auto text = random_text(static_cast<std::size_t>(state.range(0)), 5000);
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(std::string_view(text)));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Tokenize)->Arg(100'000);

void BM_CountPairs(benchmark::State& state) {
  const auto ids = random_ids(static_cast<std::size_t>(state.range(0)), 5000);
  const auto window = static_cast<std::uint32_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(count_pairs(ids, 5000, window));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CountPairs)->Args({100'000, 2})->Args({100'000, 5});

void BM_FromPairs(benchmark::State& state) {
  const auto ids = random_ids(100'000, 5000);
  const auto pairs = count_pairs(ids, 5000, 5);
  for (auto _ : state) benchmark::DoNotOptimize(from_pairs(pairs));
}
BENCHMARK(BM_FromPairs);

void BM_SgnsCellGrad(benchmark::State& state) {
  const auto f = static_cast<std::size_t>(state.range(0));
  auto rng = derive_rng(3, 0);
  std::vector<double> u(f), v(f);
  for (auto& x : u) x = uniform(rng, -0.5, 0.5);
  for (auto& x : v) x = uniform(rng, -0.5, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sgns_cell_grad(0.3, 2.0, u, v));
}
BENCHMARK(BM_SgnsCellGrad)->Arg(50)->Arg(300);

void BM_TrainEpoch(benchmark::State& state) {
  const auto ids = random_ids(50'000, 2000);
  const auto stats = from_pairs(count_pairs(ids, 2000, 5));
  TrainConfig config;
  config.objective = static_cast<ObjectiveKind>(state.range(0));
  config.dimension = 50;
  config.epochs = 1;
  config.exact_objective_cells = 100'000;
  for (auto _ : state) benchmark::DoNotOptimize(train(stats, config));
  state.counters["nnz"] = static_cast<double>(stats.nnz());
}
BENCHMARK(BM_TrainEpoch)
    ->Arg(static_cast<int>(ObjectiveKind::sgns_logistic))
    ->Arg(static_cast<int>(ObjectiveKind::glove))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
