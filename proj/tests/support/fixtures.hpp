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
#ifndef WLPCA_TESTS_FIXTURES_HPP_
#define WLPCA_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wlpca/cooc.hpp"
#include "wlpca/corpus.hpp"
#include "wlpca/model.hpp"
#include "wlpca/random.hpp"

namespace wlpca::testing {

// "a b a b" with window 1: n_{a,b} = n_{b,a} = 3, |D| = 6.
inline CoocStats abab_stats() {
  const auto tokens = tokenize(std::string_view("a b a b"));
  const auto vocab = build_vocab(tokens, {1, std::nullopt});
  return from_pairs(extract_pairs(tokens, vocab, 1));
}

// Brute-force window enumeration straight from the definition, used as an
// oracle for extract_pairs. OOV tokens are deleted first.
inline std::map<std::pair<std::string, std::string>, std::uint64_t>
brute_force_pairs(const std::vector<std::string>& tokens,
                  const std::set<std::string>& vocab, int window) {
  std::vector<std::string> kept;
  for (const auto& t : tokens) {
    if (vocab.count(t)) kept.push_back(t);
  }
  std::map<std::pair<std::string, std::string>, std::uint64_t> out;
  const int n = static_cast<int>(kept.size());
  for (int t = 0; t < n; ++t) {
    for (int j = -window; j <= window; ++j) {
      if (j == 0 || t + j < 0 || t + j >= n) continue;
      ++out[{kept[t], kept[t + j]}];
    }
  }
  return out;
}

// Random sparse counts. Every word and context appears at least once so no
// cell is degenerate.
inline CoocStats random_stats(Rng& rng, std::size_t vocab, double density,
                              std::uint64_t max_count) {
  std::vector<PairCount> pairs;
  for (std::size_t w = 0; w < vocab; ++w) {
    for (std::size_t c = 0; c < vocab; ++c) {
      const bool forced = c == (w + 1) % vocab || (vocab == 1);
      if (forced || uniform01(rng) < density) {
        pairs.push_back({static_cast<TokenId>(w), static_cast<TokenId>(c),
                         1 + uniform_below(rng, max_count)});
      }
    }
  }
  return CoocStats::from_counts(vocab, std::move(pairs));
}

// Every cell nonzero, counts uniform in [lo, hi].
inline CoocStats dense_stats(Rng& rng, std::size_t vocab, std::uint64_t lo,
                             std::uint64_t hi) {
  std::vector<PairCount> pairs;
  for (std::size_t w = 0; w < vocab; ++w) {
    for (std::size_t c = 0; c < vocab; ++c) {
      pairs.push_back({static_cast<TokenId>(w), static_cast<TokenId>(c),
                       lo + uniform_below(rng, hi - lo + 1)});
    }
  }
  return CoocStats::from_counts(vocab, std::move(pairs));
}

inline EmbeddingModel random_model(Rng& rng, std::size_t vocab,
                                   std::size_t dim, double scale) {
  EmbeddingModel m(vocab, vocab, dim);
  for (double& v : m.word_vectors().data()) v = uniform(rng, -scale, scale);
  for (double& v : m.context_vectors().data()) v = uniform(rng, -scale, scale);
  return m;
}

// Two topics with disjoint word sets ("p0".."p{n-1}" and "q0".."q{n-1}").
// Text alternates between long single-topic segments; words inside a
// segment are uniform over that topic.
struct ClusterCorpus {
  std::string text;
  std::size_t words_per_cluster = 0;
};

inline ClusterCorpus two_cluster_corpus(std::uint64_t seed,
                                        std::size_t words_per_cluster,
                                        std::size_t segments,
                                        std::size_t segment_length) {
  auto rng = derive_rng(seed, 0x636c7573);
  std::ostringstream out;
  for (std::size_t s = 0; s < segments; ++s) {
    const char topic = (s % 2 == 0) ? 'p' : 'q';
    for (std::size_t i = 0; i < segment_length; ++i) {
      out << topic << uniform_below(rng, words_per_cluster) << ' ';
    }
    out << '\n';
  }
  return {out.str(), words_per_cluster};
}

inline char cluster_of(const std::string& token) { return token.at(0); }

}  // namespace wlpca::testing

#endif  // WLPCA_TESTS_FIXTURES_HPP_
