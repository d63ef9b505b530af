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
#include "wlpca/model.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "wlpca/binary_io.hpp"
#include "wlpca/errors.hpp"
#include "wlpca/random.hpp"

namespace wlpca {
namespace {

constexpr std::string_view kModelMagic = "LXM1";
constexpr std::uint8_t kFlagBiases = 0x1;
constexpr std::uint64_t kInitStream = 0x696e6974;  // "init"

}  // namespace

EmbeddingModel::EmbeddingModel(std::size_t words, std::size_t contexts,
                               std::size_t dimension, bool with_biases)
    : word_vectors_(words, dimension),
      context_vectors_(contexts, dimension),
      has_biases_(with_biases) {
  if (dimension == 0) throw std::invalid_argument("dimension must be >= 1");
  if (with_biases) {
    word_bias_.assign(words, 0.0);
    context_bias_.assign(contexts, 0.0);
  }
}

bool EmbeddingModel::all_finite() const {
  auto finite = [](std::span<const double> xs) {
    for (double x : xs) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  };
  return finite(word_vectors_.data()) && finite(context_vectors_.data()) &&
         finite(word_bias_) && finite(context_bias_);
}

EmbeddingModel init_model(std::size_t words, std::size_t contexts,
                          std::size_t dimension, double init_scale,
                          std::uint64_t seed, bool with_biases) {
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) {
    throw std::invalid_argument("init_scale must be finite and >= 0");
  }
  EmbeddingModel model(words, contexts, dimension, with_biases);
  if (init_scale == 0.0) return model;
  const double bound = init_scale / static_cast<double>(dimension);
  auto rng = derive_rng(seed, kInitStream);
  for (double& v : model.word_vectors().data()) v = uniform(rng, -bound, bound);
  for (double& v : model.context_vectors().data()) {
    v = uniform(rng, -bound, bound);
  }
  return model;
}

void save_checkpoint(const EmbeddingModel& model, std::ostream& out) {
  if (model.word_count() != model.context_count()) {
    throw std::invalid_argument(
        "checkpoint requires equal word and context counts");
  }
  if (model.word_count() > std::numeric_limits<std::uint32_t>::max() ||
      model.dimension() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("model too large for LXM1");
  }
  write_magic(out, kModelMagic);
  write_u32(out, static_cast<std::uint32_t>(model.word_count()));
  write_u32(out, static_cast<std::uint32_t>(model.dimension()));
  write_u8(out, model.has_biases() ? kFlagBiases : 0);
  for (double v : model.word_vectors().data()) write_f64(out, v);
  for (double v : model.context_vectors().data()) write_f64(out, v);
  if (model.has_biases()) {
    for (double v : model.word_bias()) write_f64(out, v);
    for (double v : model.context_bias()) write_f64(out, v);
  }
  if (!out) throw IoError("failed writing checkpoint");
}

EmbeddingModel load_checkpoint(std::istream& in) {
  expect_magic(in, kModelMagic);
  const auto vocab = read_u32(in);
  const auto dim = read_u32(in);
  const auto flags = read_u8(in);
  if (dim == 0) throw FormatError("LXM1 dimension is zero");
  if ((flags & ~kFlagBiases) != 0) throw FormatError("LXM1 unknown flags");
  EmbeddingModel model(vocab, vocab, dim, (flags & kFlagBiases) != 0);
  for (double& v : model.word_vectors().data()) v = read_f64(in);
  for (double& v : model.context_vectors().data()) v = read_f64(in);
  if (model.has_biases()) {
    for (double& v : model.word_bias()) v = read_f64(in);
    for (double& v : model.context_bias()) v = read_f64(in);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("LXM1 trailing bytes");
  }
  return model;
}

EmbeddingModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  return load_checkpoint(in);
}

}  // namespace wlpca
