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

#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "cell_walk.hpp"
#include "wlpca/errors.hpp"
#include "wlpca/random.hpp"

namespace wlpca {
namespace {

constexpr std::uint64_t kShuffleStream = 0x73687566;  // "shuf"
constexpr std::uint64_t kSampleStream = 0x73616d70;   // "samp"
constexpr std::uint64_t kEvalStream = 0x6576616c;     // "eval"
constexpr std::uint64_t kZeroTag = std::uint64_t{1} << 63;

std::string cell_name(std::size_t w, std::size_t c) {
  return "(" + std::to_string(w) + ", " + std::to_string(c) + ")";
}

// Shared, immutable per-run data.
struct Problem {
  const CoocStats& stats;
  const ContextDistribution& dist;
  const TrainConfig& config;
  std::vector<TokenId> nz_word;
  std::vector<double> nz_response;
  std::vector<double> nz_weight;
  std::vector<double> glove_weight;

  Problem(const CoocStats& s, const ContextDistribution& d,
          const TrainConfig& c)
      : stats(s), dist(d), config(c) {
    const auto nnz = s.nnz();
    nz_word.resize(nnz);
    nz_response.resize(nnz);
    nz_weight.resize(nnz);
    glove_weight.resize(nnz);
    for (std::size_t w = 0; w < s.vocab_size(); ++w) {
      for (std::size_t i = s.offsets()[w]; i < s.offsets()[w + 1]; ++i) {
        const auto cell =
            make_cell(static_cast<TokenId>(w), s.contexts()[i], s.counts()[i],
                      s.word_marginal(static_cast<TokenId>(w)),
                      d.probs[s.contexts()[i]], c.k);
        nz_word[i] = cell.word;
        nz_response[i] = cell.response;
        nz_weight[i] = cell.weight;
        glove_weight[i] = wlpca::glove_weight(
            static_cast<double>(s.counts()[i]), c.glove);
      }
    }
  }

  double zero_weight(TokenId w, TokenId c) const {
    return config.k * static_cast<double>(stats.word_marginal(w)) *
           dist.probs[c];
  }

  // Derivative of the minimized per-cell loss w.r.t. theta.
  double nonzero_derivative(std::size_t i, double theta) const {
    switch (config.objective) {
      case ObjectiveKind::sgns_logistic:
        return -sgns_theta_gradient(nz_response[i], nz_weight[i], theta);
      case ObjectiveKind::sgns_ls:
        return sgns_ls_theta_gradient(nz_response[i], nz_weight[i], theta);
      case ObjectiveKind::glove:
        return -2.0 * glove_weight[i] *
               (std::log(static_cast<double>(stats.counts()[i])) - theta);
    }
    return 0.0;
  }

  double zero_derivative(double weight, double theta) const {
    return config.objective == ObjectiveKind::sgns_logistic
               ? -sgns_theta_gradient(0.0, weight, theta)
               : sgns_ls_theta_gradient(0.0, weight, theta);
  }
};

template <bool Shared>
inline double load(const double& x) {
  if constexpr (Shared) {
    return std::atomic_ref<const double>(x).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool Shared>
inline void store(double& x, double v) {
  if constexpr (Shared) {
    std::atomic_ref<double>(x).store(v, std::memory_order_relaxed);
  } else {
    x = v;
  }
}

struct AdaGradState {
  DenseMatrix word;
  DenseMatrix context;
  std::vector<double> word_bias;
  std::vector<double> context_bias;

  explicit AdaGradState(const EmbeddingModel& m)
      : word(m.word_count(), m.dimension()),
        context(m.context_count(), m.dimension()),
        word_bias(m.word_bias().size(), 0.0),
        context_bias(m.context_bias().size(), 0.0) {}
};

struct WorkerTally {
  std::uint64_t nonzero = 0;
  std::uint64_t zero = 0;
  std::uint64_t clamps = 0;
  double grad_sq = 0.0;
  std::optional<std::string> error;
};

double clamp_theta(double theta, double limit, WorkerTally& tally) {
  if (theta > limit) {
    ++tally.clamps;
    return limit;
  }
  if (theta < -limit) {
    ++tally.clamps;
    return -limit;
  }
  return theta;
}

template <bool Shared>
void run_cells(const Problem& problem, std::span<const std::uint64_t> order,
               EmbeddingModel& model, AdaGradState& acc, double zero_scale,
               WorkerTally& tally) {
  const auto& cfg = problem.config;
  const double lr = cfg.learning_rate;
  const double eps = cfg.adagrad_epsilon;
  const std::size_t vocab = problem.stats.vocab_size();
  const std::size_t f = model.dimension();
  const bool biases = model.has_biases();

  for (const auto code : order) {
    TokenId w, c;
    std::size_t nz = 0;
    const bool is_zero = (code & kZeroTag) != 0;
    if (is_zero) {
      const auto linear = code & ~kZeroTag;
      w = static_cast<TokenId>(linear / vocab);
      c = static_cast<TokenId>(linear % vocab);
    } else {
      nz = static_cast<std::size_t>(code);
      w = problem.nz_word[nz];
      c = problem.stats.contexts()[nz];
    }

    auto a = model.word(w);
    auto b = model.context(c);
    double theta = 0.0;
    for (std::size_t d = 0; d < f; ++d) {
      theta += load<Shared>(a[d]) * load<Shared>(b[d]);
    }
    if (biases) {
      theta += load<Shared>(model.word_bias()[w]) +
               load<Shared>(model.context_bias()[c]);
    }
    if (!std::isfinite(theta)) {
      tally.error = "non-finite theta at cell " + cell_name(w, c);
      return;
    }
    theta = clamp_theta(theta, cfg.theta_clamp, tally);

    double g;
    if (is_zero) {
      ++tally.zero;
      g = problem.zero_derivative(problem.zero_weight(w, c), theta) *
          zero_scale;
    } else {
      ++tally.nonzero;
      g = problem.nonzero_derivative(nz, theta);
    }

    auto hw = acc.word.row(w);
    auto hc = acc.context.row(c);
    double sq = 0.0;
    for (std::size_t d = 0; d < f; ++d) {
      const double ad = load<Shared>(a[d]);
      const double bd = load<Shared>(b[d]);
      const double ga = g * bd;
      const double gb = g * ad;
      sq += ga * ga + gb * gb;
      const double sw = load<Shared>(hw[d]) + ga * ga;
      const double sc = load<Shared>(hc[d]) + gb * gb;
      store<Shared>(hw[d], sw);
      store<Shared>(hc[d], sc);
      store<Shared>(a[d], ad - lr * ga / std::sqrt(sw + eps));
      store<Shared>(b[d], bd - lr * gb / std::sqrt(sc + eps));
    }
    if (biases) {
      sq += 2.0 * g * g;
      double& bw = model.word_bias()[w];
      double& bc = model.context_bias()[c];
      const double sw = load<Shared>(acc.word_bias[w]) + g * g;
      const double sc = load<Shared>(acc.context_bias[c]) + g * g;
      store<Shared>(acc.word_bias[w], sw);
      store<Shared>(acc.context_bias[c], sc);
      store<Shared>(bw, load<Shared>(bw) - lr * g / std::sqrt(sw + eps));
      store<Shared>(bc, load<Shared>(bc) - lr * g / std::sqrt(sc + eps));
    }
    tally.grad_sq += sq;
  }
}

std::size_t param_count(const EmbeddingModel& m) {
  return (m.word_count() + m.context_count()) * m.dimension() +
         m.word_bias().size() + m.context_bias().size();
}

// Adds scale * dL/dtheta * dtheta/dparams for one cell into grad.
void add_cell_gradient(const EmbeddingModel& model, TokenId w, TokenId c,
                       double g, std::span<double> grad) {
  const std::size_t f = model.dimension();
  const std::size_t ctx_base = model.word_count() * f;
  const auto a = model.word(w);
  const auto b = model.context(c);
  for (std::size_t d = 0; d < f; ++d) {
    grad[w * f + d] += g * b[d];
    grad[ctx_base + c * f + d] += g * a[d];
  }
  if (model.has_biases()) {
    const std::size_t bias_base = ctx_base + model.context_count() * f;
    grad[bias_base + w] += g;
    grad[bias_base + model.word_count() + c] += g;
  }
}

double cell_theta(const EmbeddingModel& model, TokenId w, TokenId c) {
  double theta = model.theta(w, c);
  if (model.has_biases()) {
    theta += model.word_bias()[w] + model.context_bias()[c];
  }
  return theta;
}

// Full gradient of the minimized loss, with per-cell clamping. Returns the
// number of zero cells visited.
std::uint64_t accumulate_full_gradient(const Problem& problem,
                                       const EmbeddingModel& model,
                                       std::span<double> grad,
                                       WorkerTally& tally) {
  const auto& cfg = problem.config;
  std::uint64_t zeros = 0;
  auto visit = [&](TokenId w, TokenId c, std::size_t nz) {
    double theta = cell_theta(model, w, c);
    if (!std::isfinite(theta)) {
      throw NonFiniteLoss("non-finite theta at cell " + cell_name(w, c));
    }
    theta = clamp_theta(theta, cfg.theta_clamp, tally);
    double g;
    if (nz == static_cast<std::size_t>(-1)) {
      ++zeros;
      g = problem.zero_derivative(problem.zero_weight(w, c), theta);
    } else {
      g = problem.nonzero_derivative(nz, theta);
    }
    add_cell_gradient(model, w, c, g, grad);
  };
  if (cfg.objective == ObjectiveKind::glove) {
    for (std::size_t i = 0; i < problem.stats.nnz(); ++i) {
      visit(problem.nz_word[i], problem.stats.contexts()[i], i);
    }
  } else {
    detail::for_each_valid_cell(
        problem.stats, problem.dist, cfg.k,
        [&](const CellProblem& cell, std::size_t nz) {
          visit(cell.word, cell.context, nz);
        });
  }
  return zeros;
}

void check_model_shape(const CoocStats& stats, const TrainConfig& config,
                       const EmbeddingModel& model) {
  if (model.word_count() != stats.vocab_size() ||
      model.context_count() != stats.vocab_size()) {
    throw std::invalid_argument("model rows do not match vocabulary size " +
                                std::to_string(stats.vocab_size()));
  }
  if (model.dimension() != config.dimension) {
    throw std::invalid_argument("model dimension " +
                                std::to_string(model.dimension()) +
                                " does not match config dimension " +
                                std::to_string(config.dimension));
  }
  const bool want_biases =
      config.objective == ObjectiveKind::glove && config.glove_biases;
  if (model.has_biases() != want_biases) {
    throw std::invalid_argument("model bias layout does not match config");
  }
}

std::string first_nonfinite_cell(const CoocStats& stats,
                                 const EmbeddingModel& model) {
  for (std::size_t w = 0; w < stats.vocab_size(); ++w) {
    for (std::size_t c = 0; c < stats.vocab_size(); ++c) {
      if (!std::isfinite(cell_theta(model, static_cast<TokenId>(w),
                                    static_cast<TokenId>(c)))) {
        return cell_name(w, c);
      }
    }
  }
  return "(none: loss overflowed)";
}

// Exact objective for small matrices, otherwise nonzero cells exactly plus
// an importance-weighted fixed sample of zero cells.
class ObjectiveMonitor {
 public:
  ObjectiveMonitor(const CoocStats& stats, const ContextDistribution& dist,
                   const TrainConfig& config)
      : stats_(stats), dist_(dist), config_(config) {
    if (config.objective == ObjectiveKind::glove) return;
    std::uint64_t words = 0, contexts = 0;
    for (auto n : stats.word_marginals()) words += n > 0 ? 1 : 0;
    for (double p : dist.probs) contexts += p > 0.0 ? 1 : 0;
    if (words * contexts <= config.exact_objective_cells) return;
    ZeroCellSampler probe(stats, dist, 0, 1.0);
    rate_ = std::min(1.0, static_cast<double>(config.exact_objective_cells) /
                              static_cast<double>(probe.population()));
    sample_ = ZeroCellSampler(stats, dist, derive_rng(config.seed, kEvalStream)(),
                              rate_)
                  .sample(0);
    exact_ = false;
  }

  bool exact() const { return exact_; }

  double operator()(const EmbeddingModel& model) const {
    if (exact_) return total_objective(stats_, dist_, config_, model);
    const bool ls = config_.objective == ObjectiveKind::sgns_ls;
    double total = 0.0;
    for (std::size_t w = 0; w < stats_.vocab_size(); ++w) {
      for (std::size_t i = stats_.offsets()[w]; i < stats_.offsets()[w + 1];
           ++i) {
        const auto c = stats_.contexts()[i];
        const auto cell = make_cell(static_cast<TokenId>(w), c,
                                    stats_.counts()[i],
                                    stats_.word_marginal(static_cast<TokenId>(w)),
                                    dist_.probs[c], config_.k);
        const double theta = model.theta(w, c);
        total += ls ? sgns_ls_cell_objective(cell.response, cell.weight, theta)
                    : sgns_cell_objective(cell.response, cell.weight, theta);
      }
    }
    double zero_part = 0.0;
    for (const auto& cell : sample_) {
      const double weight = config_.k *
                            static_cast<double>(stats_.word_marginal(cell.word)) *
                            dist_.probs[cell.context];
      const double theta = model.theta(cell.word, cell.context);
      zero_part += ls ? sgns_ls_cell_objective(0.0, weight, theta)
                      : sgns_cell_objective(0.0, weight, theta);
    }
    return total + zero_part / rate_;
  }

 private:
  const CoocStats& stats_;
  const ContextDistribution& dist_;
  const TrainConfig& config_;
  bool exact_ = true;
  double rate_ = 1.0;
  std::vector<Cell> sample_;
};

double resolve_zero_rate(const CoocStats& stats,
                         const ContextDistribution& dist,
                         const TrainConfig& config) {
  if (config.zero_cells.kind == ZeroCellPolicy::Kind::all) return 1.0;
  return config.zero_cells.rate ? *config.zero_cells.rate
                                : default_zero_rate(stats, dist);
}

}  // namespace

std::string_view to_string(TrainMode mode) {
  return mode == TrainMode::full_batch ? "full-batch" : "sgd";
}

TrainMode parse_train_mode(std::string_view name) {
  if (name == "sgd" || name == "stochastic" || name == "adagrad" ||
      name == "stochastic_adagrad") {
    return TrainMode::stochastic_adagrad;
  }
  if (name == "full-batch" || name == "full_batch") return TrainMode::full_batch;
  throw std::invalid_argument("unknown training mode: " + std::string(name));
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid training config: " + what);
  };
  if (!(k > 0.0) || !std::isfinite(k)) fail("k must be positive");
  if (dimension == 0) fail("dimension must be >= 1");
  if (epochs == 0) fail("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail("learning rate must be positive");
  }
  if (!(adagrad_epsilon > 0.0)) fail("adagrad epsilon must be positive");
  if (zero_cells.rate && !(*zero_cells.rate > 0.0 && *zero_cells.rate <= 1.0)) {
    fail("zero-cell rate must be in (0, 1]");
  }
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) {
    fail("init scale must be >= 0");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha must be positive");
  if (!(glove.x_max > 0.0) || !(glove.alpha > 0.0)) {
    fail("GloVe x_max and alpha must be positive");
  }
  if (glove_biases && objective != ObjectiveKind::glove) {
    fail("biases are only supported for the GloVe objective");
  }
  if (threads == 0) fail("threads must be >= 1");
  if (!(theta_clamp > 0.0)) fail("theta clamp must be positive");
  if (exact_objective_cells == 0) fail("exact objective cell budget must be >= 1");
}

std::uint64_t TrainReport::total_clamp_events() const {
  std::uint64_t n = 0;
  for (const auto& e : epochs) n += e.clamp_events;
  return n;
}

std::uint64_t TrainReport::total_zero_cells_visited() const {
  std::uint64_t n = 0;
  for (const auto& e : epochs) n += e.zero_cells_visited;
  return n;
}

double total_objective(const CoocStats& stats, const ContextDistribution& dist,
                       const TrainConfig& config,
                       const EmbeddingModel& model) {
  switch (config.objective) {
    case ObjectiveKind::sgns_logistic:
      return sgns_objective(stats, dist, config.k, model);
    case ObjectiveKind::sgns_ls:
      return sgns_ls_objective(stats, dist, config.k, model);
    case ObjectiveKind::glove:
      return glove_objective(stats, model, config.glove);
  }
  return 0.0;
}

std::vector<double> estimate_gradient(const CoocStats& stats,
                                      const ContextDistribution& dist,
                                      const TrainConfig& config,
                                      const EmbeddingModel& model,
                                      std::span<const Cell> zero_cells,
                                      double zero_rate) {
  if (!(zero_rate > 0.0 && zero_rate <= 1.0)) {
    throw std::invalid_argument("zero_rate must be in (0, 1]");
  }
  const Problem problem(stats, dist, config);
  std::vector<double> grad(param_count(model), 0.0);
  WorkerTally tally;
  for (std::size_t i = 0; i < stats.nnz(); ++i) {
    const auto w = problem.nz_word[i];
    const auto c = stats.contexts()[i];
    const double theta =
        clamp_theta(cell_theta(model, w, c), config.theta_clamp, tally);
    add_cell_gradient(model, w, c, problem.nonzero_derivative(i, theta), grad);
  }
  if (config.objective != ObjectiveKind::glove) {
    for (const auto& cell : zero_cells) {
      if (stats.count(cell.word, cell.context) != 0 ||
          is_degenerate(stats, dist, cell.word, cell.context)) {
        throw std::invalid_argument("not a valid zero cell: " +
                                    cell_name(cell.word, cell.context));
      }
      const double theta = clamp_theta(cell_theta(model, cell.word, cell.context),
                                       config.theta_clamp, tally);
      const double g =
          problem.zero_derivative(problem.zero_weight(cell.word, cell.context),
                                  theta) /
          zero_rate;
      add_cell_gradient(model, cell.word, cell.context, g, grad);
    }
  }
  return grad;
}

std::vector<double> full_gradient(const CoocStats& stats,
                                  const ContextDistribution& dist,
                                  const TrainConfig& config,
                                  const EmbeddingModel& model) {
  const Problem problem(stats, dist, config);
  std::vector<double> grad(param_count(model), 0.0);
  WorkerTally tally;
  accumulate_full_gradient(problem, model, grad, tally);
  return grad;
}

TrainResult train(const CoocStats& stats, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  const bool biases =
      config.objective == ObjectiveKind::glove && config.glove_biases;
  TrainResult result{init_model(stats.vocab_size(), stats.vocab_size(),
                                config.dimension, config.init_scale,
                                config.seed, biases),
                     {}};
  result.report = train(stats, config, result.model, on_epoch);
  return result;
}

TrainReport train(const CoocStats& stats, const TrainConfig& config,
                  EmbeddingModel& model, const EpochCallback& on_epoch) {
  config.validate();
  check_model_shape(stats, config, model);
  const auto started = std::chrono::steady_clock::now();

  const auto dist = context_distribution(stats, config.alpha);
  const Problem problem(stats, dist, config);
  const ObjectiveMonitor monitor(stats, dist, config);
  const bool use_zero_cells = config.objective != ObjectiveKind::glove;
  const double zero_rate =
      use_zero_cells ? resolve_zero_rate(stats, dist, config) : 0.0;
  std::optional<ZeroCellSampler> sampler;
  if (use_zero_cells && config.mode == TrainMode::stochastic_adagrad) {
    sampler.emplace(stats, dist, derive_rng(config.seed, kSampleStream)(),
                    zero_rate);
  }

  TrainReport report;
  report.objective = config.objective;
  report.zero_cell_rate = zero_rate;
  report.initial_objective = monitor(model);

  AdaGradState acc(model);
  const std::size_t vocab = stats.vocab_size();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    EpochStats es;
    es.epoch = epoch;

    if (config.mode == TrainMode::full_batch) {
      std::vector<double> grad(param_count(model), 0.0);
      WorkerTally tally;
      es.zero_cells_visited = accumulate_full_gradient(problem, model, grad, tally);
      es.nonzero_cells_visited = stats.nnz();
      es.clamp_events = tally.clamps;
      double sq = 0.0;
      std::size_t p = 0;
      auto step = [&](std::span<double> xs) {
        for (double& x : xs) {
          sq += grad[p] * grad[p];
          x -= config.learning_rate * grad[p++];
        }
      };
      step(model.word_vectors().data());
      step(model.context_vectors().data());
      step(model.word_bias());
      step(model.context_bias());
      es.grad_norm = std::sqrt(sq);
    } else {
      std::vector<std::uint64_t> order(stats.nnz());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      if (sampler) {
        for (const auto& cell : sampler->sample(epoch)) {
          order.push_back(kZeroTag |
                          (static_cast<std::uint64_t>(cell.word) * vocab +
                           cell.context));
        }
      }
      auto rng = derive_rng(config.seed, kShuffleStream, epoch);
      shuffle(std::span<std::uint64_t>(order), rng);

      const double zero_scale = zero_rate > 0.0 ? 1.0 / zero_rate : 0.0;
      const std::size_t workers =
          std::max<std::size_t>(1, std::min(config.threads, order.size()));
      std::vector<WorkerTally> tallies(workers);
      if (workers == 1) {
        run_cells<false>(problem, order, model, acc, zero_scale, tallies[0]);
      } else {
        const std::size_t per = (order.size() + workers - 1) / workers;
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) {
          const std::size_t begin = std::min(order.size(), t * per);
          const std::size_t end = std::min(order.size(), begin + per);
          pool.emplace_back([&, t, begin, end] {
            run_cells<true>(problem,
                            std::span<const std::uint64_t>(order).subspan(
                                begin, end - begin),
                            model, acc, zero_scale, tallies[t]);
          });
        }
      }
      double sq = 0.0;
      for (const auto& t : tallies) {
        if (t.error) throw NonFiniteLoss(*t.error + " in epoch " + std::to_string(epoch));
        es.nonzero_cells_visited += t.nonzero;
        es.zero_cells_visited += t.zero;
        es.clamp_events += t.clamps;
        sq += t.grad_sq;
      }
      const auto visited = es.nonzero_cells_visited + es.zero_cells_visited;
      es.grad_norm = visited ? std::sqrt(sq / static_cast<double>(visited)) : 0.0;
    }

    es.objective = monitor(model);
    es.objective_exact = monitor.exact();
    if (!std::isfinite(es.objective)) {
      throw NonFiniteLoss("objective became non-finite after epoch " +
                          std::to_string(epoch) + " at cell " +
                          first_nonfinite_cell(stats, model));
    }
    es.seconds = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - epoch_start)
                     .count();
    report.epochs.push_back(es);
    if (on_epoch) on_epoch(es);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

}  // namespace wlpca
