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
#ifndef WLPCA_CORPUS_HPP_
#define WLPCA_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wlpca {

// Dense 0-based id shared by the word and context roles.
using TokenId = std::uint32_t;

struct TokenizeOptions {
  bool lowercase = true;
};

// Splits on ASCII whitespace. Lowercasing touches ASCII letters only so
// multi-byte UTF-8 sequences pass through unchanged.
std::vector<std::string> tokenize(std::istream& in,
                                  const TokenizeOptions& options = {});
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizeOptions& options = {});

class Vocabulary {
 public:
  struct Entry {
    std::string token;
    std::uint64_t count = 0;
  };

  Vocabulary() = default;
  // Entries become ids 0..n-1 in the given order. Tokens must be unique,
  // non-empty and free of whitespace.
  explicit Vocabulary(std::vector<Entry> entries);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::uint64_t count(TokenId id) const { return counts_.at(id); }
  std::optional<TokenId> find(std::string_view token) const;

  std::span<const std::string> tokens() const { return tokens_; }
  std::span<const std::uint64_t> counts() const { return counts_; }

  // TSV, one row per token in id order: token<TAB>count<TAB>id
  void save_tsv(std::ostream& out) const;
  static Vocabulary load_tsv(std::istream& in);
  static Vocabulary load_tsv(const std::filesystem::path& path);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, TokenId> ids_;
};

struct VocabOptions {
  std::uint64_t min_count = 1;
  std::optional<std::size_t> max_vocab;
};

// Keeps tokens with frequency >= min_count, the max_vocab most frequent if
// set. Ids follow descending frequency; ties keep first-occurrence order.
// Throws EmptyCorpus for an empty stream. A threshold that excludes every
// token yields an empty vocabulary, not an error.
Vocabulary build_vocab(std::span<const std::string> tokens,
                       const VocabOptions& options = {});

// Maps tokens to ids, dropping out-of-vocabulary tokens entirely so that
// windows span across them.
std::vector<TokenId> encode(std::span<const std::string> tokens,
                            const Vocabulary& vocab);

struct PairCount {
  TokenId word = 0;
  TokenId context = 0;
  std::uint64_t count = 0;

  friend bool operator==(const PairCount&, const PairCount&) = default;
};

// Aggregated multiset of (word, context) occurrences. pairs is sorted by
// (word, context), holds no duplicates and no zero counts.
struct PairStream {
  std::vector<PairCount> pairs;
  std::size_t vocab_size = 0;
  std::uint32_t window = 0;

  std::uint64_t total() const;
  bool empty() const { return pairs.empty(); }
};

// Symmetric uniform window over an already-encoded id sequence. For every
// position t emits (ids[t], ids[t+j]) for 0 < |j| <= window within bounds.
// With threads > 1 the sequence is sharded by centre position and the shard
// counts are summed, which gives the same result as threads == 1.
PairStream count_pairs(std::span<const TokenId> ids, std::size_t vocab_size,
                       std::uint32_t window, std::size_t threads = 1);

PairStream extract_pairs(std::span<const std::string> tokens,
                         const Vocabulary& vocab, std::uint32_t window,
                         std::size_t threads = 1);

// Sums two streams over the same vocabulary.
PairStream merge(const PairStream& a, const PairStream& b);

}  // namespace wlpca

#endif  // WLPCA_CORPUS_HPP_
