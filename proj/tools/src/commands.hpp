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
#ifndef WLPCA_TOOLS_COMMANDS_HPP_
#define WLPCA_TOOLS_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wlpca/errors.hpp"

namespace wlpca::cli {

class UnknownToken : public Error {
 public:
  explicit UnknownToken(const std::string& token)
      : Error("unknown token '" + token + "'") {}
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

struct BuildCoocOptions {
  std::vector<std::string> inputs;
  std::string output;
  std::uint32_t window = 5;
  std::uint64_t min_count = 5;
  std::optional<std::size_t> max_vocab;
  bool lowercase = true;
  std::size_t threads = 1;
  bool debug_tsv = false;
  bool tsv = false;

  // All options that influence the outputs, in a fixed order.
  std::vector<std::string> canonical_arguments() const;
};

struct TrainOptions {
  std::string cooc;
  std::optional<std::string> vocab;
  std::string output;
  std::string objective = "sgns";
  std::string mode = "sgd";
  double k = 5.0;
  double alpha = 1.0;
  std::size_t dim = 50;
  std::size_t epochs = 15;
  double lr = 0.05;
  double adagrad_epsilon = 1e-8;
  // unset: automatic rate; "all" or a number in (0, 1]
  std::optional<std::string> zero_rate;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  double init_scale = 1.0;
  double x_max = 100.0;
  double glove_power = 0.75;
  bool biases = false;
  double clamp = 50.0;
  std::uint64_t exact_objective_cells = 1'000'000;
  bool export_text = false;
  bool tsv = false;
  bool quiet = false;

  std::vector<std::string> canonical_arguments() const;
};

struct IdentityOptions {
  std::string cooc;
  double k = 5.0;
  double alpha = 1.0;
  bool tsv = false;
};

struct GradcheckOptions {
  std::string objective = "sgns";
  std::size_t cells = 100;
  std::uint64_t seed = 1;
  double step = 1e-5;
  bool biases = false;
  bool tsv = false;
};

struct LookupOptions {
  std::string model;
  std::string vocab;
  std::string space = "word";
  std::size_t top = 10;
  std::vector<std::string> tokens;
  bool tsv = false;
};

void cmd_build_cooc(const BuildCoocOptions& options, Streams io);
void cmd_train(const TrainOptions& options, Streams io);
void cmd_eval_identity(const IdentityOptions& options, Streams io);
// Returns false when the check fails its tolerance.
bool cmd_eval_gradcheck(const GradcheckOptions& options, Streams io);
void cmd_eval_neighbors(const LookupOptions& options, Streams io);
void cmd_eval_similarity(const LookupOptions& options, Streams io);

std::string format_double(double value);

}  // namespace wlpca::cli

#endif  // WLPCA_TOOLS_COMMANDS_HPP_
