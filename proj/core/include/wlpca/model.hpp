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
#ifndef WLPCA_MODEL_HPP_
#define WLPCA_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "wlpca/matrix.hpp"

namespace wlpca {

// Word matrix A (rows v_w) and context matrix B (rows v_c) so that the
// natural parameter of cell (w, c) is v_w . v_c. Bias vectors are only
// used by the GloVe objective.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(std::size_t words, std::size_t contexts,
                 std::size_t dimension, bool with_biases = false);

  std::size_t dimension() const { return word_vectors_.cols(); }
  std::size_t word_count() const { return word_vectors_.rows(); }
  std::size_t context_count() const { return context_vectors_.rows(); }
  bool has_biases() const { return has_biases_; }

  DenseMatrix& word_vectors() { return word_vectors_; }
  const DenseMatrix& word_vectors() const { return word_vectors_; }
  DenseMatrix& context_vectors() { return context_vectors_; }
  const DenseMatrix& context_vectors() const { return context_vectors_; }

  std::span<double> word(std::size_t w) { return word_vectors_.row(w); }
  std::span<const double> word(std::size_t w) const {
    return word_vectors_.row(w);
  }
  std::span<double> context(std::size_t c) { return context_vectors_.row(c); }
  std::span<const double> context(std::size_t c) const {
    return context_vectors_.row(c);
  }

  // Empty when has_biases() is false.
  std::vector<double>& word_bias() { return word_bias_; }
  const std::vector<double>& word_bias() const { return word_bias_; }
  std::vector<double>& context_bias() { return context_bias_; }
  const std::vector<double>& context_bias() const { return context_bias_; }

  double theta(std::size_t w, std::size_t c) const {
    return dot(word(w), context(c));
  }

  bool all_finite() const;

  friend bool operator==(const EmbeddingModel&,
                         const EmbeddingModel&) = default;

 private:
  DenseMatrix word_vectors_;
  DenseMatrix context_vectors_;
  std::vector<double> word_bias_;
  std::vector<double> context_bias_;
  bool has_biases_ = false;
};

// Entries i.i.d. uniform in [-init_scale/f, init_scale/f], biases zero.
EmbeddingModel init_model(std::size_t words, std::size_t contexts,
                          std::size_t dimension, double init_scale,
                          std::uint64_t seed, bool with_biases = false);

// Checkpoint, little-endian:
//   "LXM1", u32 vocab_size, u32 f, u8 flags (bit 0: biases),
//   word matrix, context matrix, [word bias, context bias] as f64 row-major.
// Requires word_count() == context_count().
void save_checkpoint(const EmbeddingModel& model, std::ostream& out);
EmbeddingModel load_checkpoint(std::istream& in);
EmbeddingModel load_checkpoint(const std::filesystem::path& path);

}  // namespace wlpca

#endif  // WLPCA_MODEL_HPP_
