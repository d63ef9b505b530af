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
#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "manifest.hpp"
#include "wlpca/binary_io.hpp"
#include "wlpca/cooc.hpp"
#include "wlpca/corpus.hpp"
#include "wlpca/eval.hpp"
#include "wlpca/model.hpp"
#include "wlpca/objective.hpp"
#include "wlpca/trainer.hpp"

namespace wlpca::cli {
namespace {

namespace fs = std::filesystem;

struct OutputFile {
  std::string role;
  fs::path path;
  bool binary = false;
  std::string bytes;
};

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream out(std::ios::binary);
  fn(out);
  return std::move(out).str();
}

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
  if (prefix.empty()) throw std::invalid_argument("--output must not be empty");
  return fs::path(prefix + suffix);
}

// Stages every output plus the manifest, then renames them all into place.
void commit_outputs(Manifest& manifest, const std::vector<OutputFile>& files,
                    const fs::path& manifest_path) {
  const auto parent = manifest_path.parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw IoError("cannot create " + parent.string() + ": " + ec.message());
  }
  manifest.outputs.clear();
  for (const auto& f : files) {
    manifest.outputs.push_back(
        {f.role, f.path.filename().string(), sha256_hex(f.bytes)});
  }
  StagedOutputs staged;
  for (const auto& f : files) {
    staged.add(f.path, f.binary, [&](std::ostream& out) { out << f.bytes; });
  }
  const auto text = manifest.serialize();
  staged.add(manifest_path, false, [&](std::ostream& out) { out << text; });
  staged.commit();
}

ZeroCellPolicy parse_zero_rate(const std::optional<std::string>& value) {
  if (!value) return ZeroCellPolicy::automatic();
  if (*value == "all") return ZeroCellPolicy::all_cells();
  std::size_t used = 0;
  double r = 0.0;
  try {
    r = std::stod(*value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value->size()) {
    throw std::invalid_argument("--zero-rate expects a number or 'all', got '" +
                                *value + "'");
  }
  return ZeroCellPolicy::sampled(r);
}

TrainConfig to_config(const TrainOptions& o) {
  TrainConfig c;
  c.objective = parse_objective(o.objective);
  c.mode = parse_train_mode(o.mode);
  c.k = o.k;
  c.alpha = o.alpha;
  c.dimension = o.dim;
  c.epochs = o.epochs;
  c.learning_rate = o.lr;
  c.adagrad_epsilon = o.adagrad_epsilon;
  c.zero_cells = parse_zero_rate(o.zero_rate);
  c.seed = o.seed;
  c.threads = o.threads;
  c.init_scale = o.init_scale;
  c.glove.x_max = o.x_max;
  c.glove.alpha = o.glove_power;
  c.glove_biases = o.biases;
  c.theta_clamp = o.clamp;
  c.exact_objective_cells = o.exact_objective_cells;
  c.validate();
  return c;
}

nlohmann::json config_json(const TrainConfig& c) {
  nlohmann::json zero;
  if (c.zero_cells.kind == ZeroCellPolicy::Kind::all) {
    zero = "all";
  } else if (c.zero_cells.rate) {
    zero = *c.zero_cells.rate;
  } else {
    zero = "auto";
  }
  return {
      {"objective", std::string(to_string(c.objective))},
      {"mode", std::string(to_string(c.mode))},
      {"k", c.k},
      {"alpha", c.alpha},
      {"dimension", c.dimension},
      {"epochs", c.epochs},
      {"learning_rate", c.learning_rate},
      {"adagrad_epsilon", c.adagrad_epsilon},
      {"zero_cells", zero},
      {"seed", c.seed},
      {"threads", c.threads},
      {"init_scale", c.init_scale},
      {"glove_x_max", c.glove.x_max},
      {"glove_power", c.glove.alpha},
      {"glove_biases", c.glove_biases},
      {"theta_clamp", c.theta_clamp},
      {"exact_objective_cells", c.exact_objective_cells},
  };
}

nlohmann::json upstream_corpus_config(const fs::path& cooc_path) {
  if (cooc_path.extension() != ".cooc") return nullptr;
  auto sibling = cooc_path;
  sibling.replace_extension(".manifest.json");
  std::error_code ec;
  if (!fs::is_regular_file(sibling, ec)) return nullptr;
  try {
    const auto m = Manifest::load(sibling);
    if (m.command == "build-cooc") return m.config;
  } catch (const Error&) {
  }
  return nullptr;
}

TokenId lookup(const Vocabulary& vocab, const std::string& token) {
  const auto id = vocab.find(token);
  if (!id) throw UnknownToken(token);
  return *id;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<std::string> BuildCoocOptions::canonical_arguments() const {
  std::vector<std::string> a{"build-cooc"};
  for (const auto& in : inputs) {
    a.push_back("--input");
    a.push_back(in);
  }
  a.insert(a.end(), {"--window", std::to_string(window), "--min-count",
                     std::to_string(min_count)});
  if (max_vocab) a.insert(a.end(), {"--max-vocab", std::to_string(*max_vocab)});
  if (!lowercase) a.push_back("--no-lowercase");
  a.insert(a.end(), {"--threads", std::to_string(threads)});
  if (debug_tsv) a.push_back("--debug-tsv");
  return a;
}

std::vector<std::string> TrainOptions::canonical_arguments() const {
  std::vector<std::string> a{"train", "--cooc", cooc};
  if (vocab) a.insert(a.end(), {"--vocab", *vocab});
  a.insert(a.end(), {"--objective", objective,
                     "--mode", mode,
                     "--k", format_double(k),
                     "--alpha", format_double(alpha),
                     "--dim", std::to_string(dim),
                     "--epochs", std::to_string(epochs),
                     "--lr", format_double(lr),
                     "--epsilon", format_double(adagrad_epsilon)});
  if (zero_rate) a.insert(a.end(), {"--zero-rate", *zero_rate});
  a.insert(a.end(), {"--seed", std::to_string(seed),
                     "--threads", std::to_string(threads),
                     "--init-scale", format_double(init_scale),
                     "--x-max", format_double(x_max),
                     "--glove-power", format_double(glove_power),
                     "--clamp", format_double(clamp),
                     "--exact-objective-cells",
                     std::to_string(exact_objective_cells)});
  if (biases) a.push_back("--biases");
  if (export_text) a.push_back("--export-text");
  return a;
}

void cmd_build_cooc(const BuildCoocOptions& o, Streams io) {
  if (o.inputs.empty()) throw std::invalid_argument("at least one --input is required");
  const TokenizeOptions topt{o.lowercase};
  std::vector<std::vector<std::string>> docs;
  std::size_t n_tokens = 0;
  Manifest manifest;
  manifest.command = "build-cooc";
  manifest.arguments = o.canonical_arguments();
  for (const auto& path : o.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input " + path);
    docs.push_back(tokenize(in, topt));
    if (in.bad()) throw IoError("read failed: " + path);
    n_tokens += docs.back().size();
    manifest.inputs.push_back({"corpus", path, sha256_file(path)});
  }

  std::vector<std::string> all;
  all.reserve(n_tokens);
  for (const auto& d : docs) all.insert(all.end(), d.begin(), d.end());
  const auto vocab = build_vocab(all, VocabOptions{o.min_count, o.max_vocab});
  all = {};
  if (vocab.size() == 0) {
    throw EmptyCorpus("no token occurs at least " + std::to_string(o.min_count) +
                      " times");
  }

  PairStream pairs{{}, vocab.size(), o.window};
  for (const auto& d : docs) {
    pairs = merge(pairs, extract_pairs(d, vocab, o.window, o.threads));
  }
  docs = {};
  const auto stats = from_pairs(pairs);

  manifest.config = {
      {"window", o.window},
      {"min_count", o.min_count},
      {"max_vocab", o.max_vocab ? nlohmann::json(*o.max_vocab) : nlohmann::json()},
      {"lowercase", o.lowercase},
      {"threads", o.threads},
  };
  manifest.extra = {{"tokens", n_tokens},
                    {"total_pairs", stats.total()},
                    {"vocab_size", stats.vocab_size()},
                    {"nnz", stats.nnz()}};

  std::vector<OutputFile> files;
  files.push_back({"cooc", with_suffix(o.output, ".cooc"), true,
                   render([&](std::ostream& out) { save_cooc(stats, out); })});
  files.push_back({"vocab", with_suffix(o.output, ".vocab.tsv"), false,
                   render([&](std::ostream& out) { vocab.save_tsv(out); })});
  if (o.debug_tsv) {
    files.push_back({"cooc_tsv", with_suffix(o.output, ".cooc.tsv"), false,
                     render([&](std::ostream& out) {
                       save_cooc_tsv(stats, vocab, out);
                     })});
  }
  commit_outputs(manifest, files, with_suffix(o.output, ".manifest.json"));

  if (o.tsv) {
    io.out << "tokens\ttotal_pairs\tvocab_size\tnnz\n"
           << n_tokens << '\t' << stats.total() << '\t' << stats.vocab_size()
           << '\t' << stats.nnz() << '\n';
  } else {
    io.out << "tokens:      " << n_tokens << '\n'
           << "|D|:         " << stats.total() << '\n'
           << "vocab size:  " << stats.vocab_size() << '\n'
           << "nnz:         " << stats.nnz() << '\n';
  }
}

void cmd_train(const TrainOptions& o, Streams io) {
  const auto config = to_config(o);
  if (o.output.empty()) throw std::invalid_argument("--output is required");
  if (o.export_text && !o.vocab) {
    throw std::invalid_argument("--export-text needs --vocab");
  }
  Manifest manifest;
  manifest.command = "train";
  manifest.arguments = o.canonical_arguments();
  const auto stats = load_cooc(fs::path(o.cooc));
  manifest.inputs.push_back({"cooc", o.cooc, sha256_file(o.cooc)});
  std::optional<Vocabulary> vocab;
  if (o.vocab) {
    vocab = Vocabulary::load_tsv(fs::path(*o.vocab));
    if (vocab->size() != stats.vocab_size()) {
      throw FormatError("vocabulary has " + std::to_string(vocab->size()) +
                        " entries but the co-occurrence file has " +
                        std::to_string(stats.vocab_size()));
    }
    manifest.inputs.push_back({"vocab", *o.vocab, sha256_file(*o.vocab)});
  }
  if (config.threads > 1) {
    io.err << "warning: training with " << config.threads
           << " threads is lock-free and not bit-reproducible\n";
  }

  const bool progress = !o.quiet && !o.tsv;
  if (progress) {
    io.out << "training " << to_string(config.objective) << " ("
           << to_string(config.mode) << ") on " << stats.vocab_size()
           << " words, " << stats.nnz() << " nonzero cells\n";
  }
  const auto result = train(stats, config, [&](const EpochStats& e) {
    if (!progress) return;
    char line[200];
    std::snprintf(line, sizeof(line),
                  "epoch %3zu  objective %.10g%s  grad_norm %.4g  zero_cells "
                  "%llu  clamps %llu  %.2fs\n",
                  e.epoch, e.objective, e.objective_exact ? "" : " (sampled)",
                  e.grad_norm,
                  static_cast<unsigned long long>(e.zero_cells_visited),
                  static_cast<unsigned long long>(e.clamp_events), e.seconds);
    io.out << line << std::flush;
  });
  const auto& report = result.report;

  const auto log = render([&](std::ostream& out) {
    out << "epoch\tobjective\tgrad_norm\tzero_cells_visited\tclamp_events\n";
    for (const auto& e : report.epochs) {
      out << e.epoch << '\t' << format_double(e.objective) << '\t'
          << format_double(e.grad_norm) << '\t' << e.zero_cells_visited << '\t'
          << e.clamp_events << '\n';
    }
  });

  manifest.config = config_json(config);
  manifest.config["corpus"] = upstream_corpus_config(o.cooc);
  manifest.extra = {
      {"zero_cell_rate", report.zero_cell_rate},
      {"initial_objective", report.initial_objective},
      {"final_objective", report.epochs.back().objective},
  };

  std::vector<OutputFile> files;
  files.push_back({"checkpoint", with_suffix(o.output, ".lxm"), true,
                   render([&](std::ostream& out) {
                     save_checkpoint(result.model, out);
                   })});
  files.push_back({"log", with_suffix(o.output, ".log.tsv"), false, log});
  if (o.export_text) {
    files.push_back({"vectors", with_suffix(o.output, ".vec"), false,
                     render([&](std::ostream& out) {
                       write_embeddings_text(result.model, *vocab, out);
                     })});
  }
  commit_outputs(manifest, files, with_suffix(o.output, ".manifest.json"));

  if (o.tsv) {
    io.out << log;
  } else if (progress) {
    io.out << "final objective " << format_double(report.epochs.back().objective) << " in "
           << report.wall_seconds << "s\n";
  }
}

void cmd_eval_identity(const IdentityOptions& o, Streams io) {
  const auto stats = load_cooc(fs::path(o.cooc));
  const auto r =
      check_logit_identity(stats, context_distribution(stats, o.alpha), o.k);
  if (o.tsv) {
    io.out << "cells_checked\tmax_deviation\n"
           << r.cells_checked << '\t' << format_double(r.max_deviation) << '\n';
  } else {
    io.out << "cells checked:  " << r.cells_checked << '\n'
           << "max deviation:  " << format_double(r.max_deviation) << '\n';
  }
}

bool cmd_eval_gradcheck(const GradcheckOptions& o, Streams io) {
  const auto kind = parse_objective(o.objective);
  GradientCheckOptions opts;
  opts.step = o.step;
  opts.glove_biases = o.biases;
  if (o.biases && kind != ObjectiveKind::glove) {
    throw std::invalid_argument("--biases applies to the GloVe objective only");
  }
  const auto r = finite_difference_check(kind, o.cells, o.seed, opts);
  const bool ok = r.max_relative_error < 1e-6 && r.max_absolute_error_near_zero < 1e-10;
  if (o.tsv) {
    io.out << "objective\tcells\tmax_relative_error\tmax_absolute_error_near_"
              "zero\tstatus\n"
           << to_string(kind) << '\t' << (r.cells_relative + r.cells_near_zero)
           << '\t' << format_double(r.max_relative_error) << '\t'
           << format_double(r.max_absolute_error_near_zero) << '\t'
           << (ok ? "pass" : "fail") << '\n';
  } else {
    io.out << "objective:                    " << to_string(kind) << '\n'
           << "cells (relative/near zero):   " << r.cells_relative << '/'
           << r.cells_near_zero << '\n'
           << "max relative error:           "
           << format_double(r.max_relative_error) << '\n'
           << "max absolute error near zero: "
           << format_double(r.max_absolute_error_near_zero) << '\n'
           << (ok ? "PASS" : "FAIL") << '\n';
  }
  return ok;
}

void cmd_eval_neighbors(const LookupOptions& o, Streams io) {
  const auto model = load_checkpoint(fs::path(o.model));
  const auto vocab = Vocabulary::load_tsv(fs::path(o.vocab));
  if (vocab.size() != model.word_count()) {
    throw FormatError("vocabulary does not match the checkpoint");
  }
  const auto query = lookup(vocab, o.tokens.at(0));
  const auto nn =
      nearest_neighbors(model, query, o.top, parse_vector_space(o.space));
  if (o.tsv) io.out << "rank\ttoken\tsimilarity\n";
  std::size_t rank = 0;
  for (const auto& [id, sim] : nn) {
    ++rank;
    if (o.tsv) {
      io.out << rank << '\t' << vocab.token(id) << '\t' << format_double(sim)
             << '\n';
    } else {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%8.5f", sim);
      io.out << rank << ". " << vocab.token(id) << "  " << buf << '\n';
    }
  }
}

void cmd_eval_similarity(const LookupOptions& o, Streams io) {
  const auto model = load_checkpoint(fs::path(o.model));
  const auto vocab = Vocabulary::load_tsv(fs::path(o.vocab));
  if (vocab.size() != model.word_count()) {
    throw FormatError("vocabulary does not match the checkpoint");
  }
  const auto a = lookup(vocab, o.tokens.at(0));
  const auto b = lookup(vocab, o.tokens.at(1));
  const double s = similarity(model, a, b, parse_vector_space(o.space));
  if (o.tsv) {
    io.out << "token_a\ttoken_b\tsimilarity\n"
           << o.tokens[0] << '\t' << o.tokens[1] << '\t' << format_double(s)
           << '\n';
  } else {
    io.out << format_double(s) << '\n';
  }
}

}  // namespace wlpca::cli
