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
#include "wlpca/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.hpp"
#include "manifest.hpp"
#include "wlpca/errors.hpp"

namespace wlpca::cli {
namespace {

namespace fs = std::filesystem;

struct ReplayOptions {
  std::string manifest;
  std::string output;
};

int dispatch(const std::vector<std::string>& args, Streams io, int depth);

// Reruns a recorded command into a new output prefix and compares the new
// output digests against the recorded ones.
int replay(const ReplayOptions& o, Streams io, int depth) {
  if (depth > 0) throw std::invalid_argument("replay cannot be nested");
  const auto m = Manifest::load(o.manifest);
  if (m.command != "build-cooc" && m.command != "train") {
    throw FormatError("manifest records unsupported command '" + m.command + "'");
  }
  if (m.arguments.empty() || m.arguments.front() != m.command) {
    throw FormatError("manifest arguments do not match its command");
  }
  auto args = m.arguments;
  const auto base = fs::path(o.manifest).parent_path();
  for (const auto& in : m.inputs) {
    fs::path resolved(in.path);
    std::error_code ec;
    if (resolved.is_relative() && !fs::exists(resolved, ec) &&
        fs::exists(base / resolved, ec)) {
      resolved = base / resolved;
      std::replace(args.begin(), args.end(), in.path, resolved.string());
    }
    if (sha256_file(resolved) != in.sha256) {
      throw IoError("input " + resolved.string() +
                    " does not match the digest recorded in the manifest");
    }
  }
  if (m.config.contains("threads") && m.config["threads"].is_number() &&
      m.config["threads"].get<std::size_t>() > 1) {
    io.err << "warning: the recorded run used several threads; outputs may "
              "differ\n";
  }
  args.insert(args.end(), {"--output", o.output});
  if (m.command == "train") args.push_back("--quiet");
  std::ostringstream sink;
  const int rc = dispatch(args, Streams{sink, io.err}, depth + 1);
  if (rc != kOk) return rc;

  const auto fresh = Manifest::load(o.output + ".manifest.json");
  std::map<std::string, std::string> produced;
  for (const auto& f : fresh.outputs) produced[f.role] = f.sha256;
  std::size_t mismatches = 0;
  for (const auto& f : m.outputs) {
    const auto it = produced.find(f.role);
    const bool same = it != produced.end() && it->second == f.sha256;
    if (!same) ++mismatches;
    io.out << (same ? "identical  " : "DIFFERENT  ") << f.role << "  "
           << f.path << '\n';
  }
  if (produced.size() != m.outputs.size()) ++mismatches;
  io.out << (mismatches == 0 ? "replay reproduced all outputs\n"
                             : "replay did not reproduce the outputs\n");
  return mismatches == 0 ? kOk : kFailure;
}

int dispatch(const std::vector<std::string>& args, Streams io, int depth) {
  CLI::App app{"Weighted logistic PCA word embeddings", "wlpca"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  BuildCoocOptions build;
  std::size_t max_vocab = 0;
  bool no_lowercase = false;
  auto* b = app.add_subcommand("build-cooc", "count co-occurrences of a text corpus");
  b->add_option("--input", build.inputs, "input text file (repeatable)")->required();
  b->add_option("--output", build.output, "output prefix")->required();
  b->add_option("--window", build.window, "symmetric window size")->capture_default_str();
  b->add_option("--min-count", build.min_count, "minimum token frequency")
      ->capture_default_str();
  auto* max_vocab_opt =
      b->add_option("--max-vocab", max_vocab, "keep only the most frequent tokens");
  b->add_flag("--no-lowercase", no_lowercase, "keep the original case");
  b->add_option("--threads", build.threads, "counting threads")->capture_default_str();
  b->add_flag("--debug-tsv", build.debug_tsv, "also write a readable TSV of the cells");
  b->add_flag("--tsv", build.tsv, "machine-readable summary");

  TrainOptions tr;
  std::string vocab_path, zero_rate;
  auto* t = app.add_subcommand("train", "fit embeddings to a co-occurrence file");
  t->add_option("--cooc", tr.cooc, "co-occurrence file")->required();
  auto* vocab_opt = t->add_option("--vocab", vocab_path, "vocabulary TSV");
  t->add_option("--output", tr.output, "output prefix")->required();
  t->add_option("--objective", tr.objective, "sgns, sgns-ls or glove")
      ->capture_default_str();
  t->add_option("--mode", tr.mode, "sgd or full-batch")->capture_default_str();
  t->add_option("--k", tr.k, "negative samples per positive pair")->capture_default_str();
  t->add_option("--alpha", tr.alpha, "context distribution exponent")
      ->capture_default_str();
  t->add_option("--dim", tr.dim, "embedding dimension")->capture_default_str();
  t->add_option("--epochs", tr.epochs)->capture_default_str();
  t->add_option("--lr", tr.lr, "learning rate")->capture_default_str();
  t->add_option("--epsilon", tr.adagrad_epsilon, "AdaGrad epsilon")->capture_default_str();
  auto* zero_opt = t->add_option("--zero-rate", zero_rate,
                                 "zero-cell sampling rate in (0, 1], or 'all'");
  t->add_option("--seed", tr.seed)->capture_default_str();
  t->add_option("--threads", tr.threads)->capture_default_str();
  t->add_option("--init-scale", tr.init_scale)->capture_default_str();
  t->add_option("--x-max", tr.x_max, "GloVe weighting cutoff")->capture_default_str();
  t->add_option("--glove-power", tr.glove_power, "GloVe weighting exponent")
      ->capture_default_str();
  t->add_option("--clamp", tr.clamp, "bound on |theta| during updates")
      ->capture_default_str();
  t->add_option("--exact-objective-cells", tr.exact_objective_cells,
                "largest problem whose objective is evaluated exactly")
      ->capture_default_str();
  t->add_flag("--biases", tr.biases, "GloVe word and context biases");
  t->add_flag("--export-text", tr.export_text, "also write PREFIX.vec (needs --vocab)");
  t->add_flag("--tsv", tr.tsv, "print the epoch log as TSV");
  t->add_flag("--quiet", tr.quiet, "no progress output");

  auto* e = app.add_subcommand("eval", "inspect data and models");
  e->require_subcommand(1);
  IdentityOptions id;
  auto* ei = e->add_subcommand("identity", "check logit(x) = PMI - log k on a cooc file");
  ei->add_option("--cooc", id.cooc)->required();
  ei->add_option("--k", id.k)->capture_default_str();
  ei->add_option("--alpha", id.alpha)->capture_default_str();
  ei->add_flag("--tsv", id.tsv);

  GradcheckOptions gc;
  auto* eg = e->add_subcommand("gradcheck", "finite-difference check of the gradients");
  eg->add_option("--objective", gc.objective)->capture_default_str();
  eg->add_option("--cells", gc.cells)->capture_default_str();
  eg->add_option("--seed", gc.seed)->capture_default_str();
  eg->add_option("--step", gc.step)->capture_default_str();
  eg->add_flag("--biases", gc.biases);
  eg->add_flag("--tsv", gc.tsv);

  LookupOptions nb, sim;
  auto* en = e->add_subcommand("neighbors", "nearest neighbours of a token");
  en->add_option("token", nb.tokens)->required()->expected(1);
  en->add_option("--model", nb.model, "checkpoint")->required();
  en->add_option("--vocab", nb.vocab)->required();
  en->add_option("--top", nb.top)->capture_default_str();
  en->add_option("--space", nb.space, "word, context or averaged")->capture_default_str();
  en->add_flag("--tsv", nb.tsv);
  auto* es = e->add_subcommand("similarity", "cosine similarity of two tokens");
  es->add_option("tokens", sim.tokens)->required()->expected(2);
  es->add_option("--model", sim.model, "checkpoint")->required();
  es->add_option("--vocab", sim.vocab)->required();
  es->add_option("--space", sim.space, "word, context or averaged")->capture_default_str();
  es->add_flag("--tsv", sim.tsv);

  ReplayOptions rp;
  auto* r = app.add_subcommand("replay", "rerun a recorded command and compare outputs");
  r->add_option("manifest", rp.manifest)->required();
  r->add_option("--output", rp.output, "output prefix for the rerun")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err, io.out, io.err);
    return rc == 0 ? kOk : kBadArguments;
  }

  if (*b) {
    if (max_vocab_opt->count() > 0) build.max_vocab = max_vocab;
    build.lowercase = !no_lowercase;
    cmd_build_cooc(build, io);
  } else if (*t) {
    if (vocab_opt->count() > 0) tr.vocab = vocab_path;
    if (zero_opt->count() > 0) tr.zero_rate = zero_rate;
    cmd_train(tr, io);
  } else if (*ei) {
    cmd_eval_identity(id, io);
  } else if (*eg) {
    return cmd_eval_gradcheck(gc, io) ? kOk : kFailure;
  } else if (*en) {
    cmd_eval_neighbors(nb, io);
  } else if (*es) {
    cmd_eval_similarity(sim, io);
  } else if (*r) {
    return replay(rp, io, depth);
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  auto fail = [&](int code, const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return code;
  };
  try {
    return dispatch(args, Streams{out, err}, 0);
  } catch (const UnknownToken& e) {
    return fail(kUnknownToken, e);
  } catch (const EmptyCorpus& e) {
    return fail(kEmptyInput, e);
  } catch (const EmptyCooc& e) {
    return fail(kEmptyInput, e);
  } catch (const NonFiniteLoss& e) {
    return fail(kNonFiniteLoss, e);
  } catch (const IoError& e) {
    return fail(kIoError, e);
  } catch (const FormatError& e) {
    return fail(kIoError, e);
  } catch (const std::invalid_argument& e) {
    return fail(kBadArguments, e);
  } catch (const std::exception& e) {
    return fail(kFailure, e);
  }
}

}  // namespace wlpca::cli
