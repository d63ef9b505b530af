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
#include "wlpca/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "wlpca/errors.hpp"

namespace wlpca {
namespace {

bool is_space(char ch) {
  return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\v' ||
         ch == '\f';
}

char ascii_lower(char ch) {
  return (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a') : ch;
}

std::uint64_t pack(TokenId word, TokenId context) {
  return (static_cast<std::uint64_t>(word) << 32) | context;
}

// Sorted merge of two aggregated pair lists, summing equal keys.
std::vector<PairCount> merge_sorted(const std::vector<PairCount>& a,
                                    const std::vector<PairCount>& b) {
  std::vector<PairCount> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const auto ka = pack(a[i].word, a[i].context);
    const auto kb = pack(b[j].word, b[j].context);
    if (ka < kb) {
      out.push_back(a[i++]);
    } else if (kb < ka) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].word, a[i].context, a[i].count + b[j].count});
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return out;
}

// Buffers packed pair keys and folds them into a sorted run list whenever
// the buffer fills, so memory stays proportional to the distinct pairs.
class PairAccumulator {
 public:
  explicit PairAccumulator(std::size_t buffer_size = std::size_t{1} << 22)
      : capacity_(buffer_size) {
    buffer_.reserve(capacity_);
  }

  void add(TokenId word, TokenId context) {
    buffer_.push_back(pack(word, context));
    if (buffer_.size() >= capacity_) flush();
  }

  std::vector<PairCount> finish() {
    flush();
    return std::move(runs_);
  }

 private:
  void flush() {
    if (buffer_.empty()) return;
    std::sort(buffer_.begin(), buffer_.end());
    std::vector<PairCount> fresh;
    for (std::size_t i = 0; i < buffer_.size();) {
      std::size_t j = i + 1;
      while (j < buffer_.size() && buffer_[j] == buffer_[i]) ++j;
      fresh.push_back({static_cast<TokenId>(buffer_[i] >> 32),
                       static_cast<TokenId>(buffer_[i] & 0xFFFFFFFFu),
                       static_cast<std::uint64_t>(j - i)});
      i = j;
    }
    runs_ = runs_.empty() ? std::move(fresh) : merge_sorted(runs_, fresh);
    buffer_.clear();
  }

  std::size_t capacity_;
  std::vector<std::uint64_t> buffer_;
  std::vector<PairCount> runs_;
};

void count_shard(std::span<const TokenId> ids, std::size_t begin,
                 std::size_t end, std::uint32_t window,
                 std::vector<PairCount>& out) {
  PairAccumulator acc;
  const std::size_t n = ids.size();
  for (std::size_t t = begin; t < end; ++t) {
    const std::size_t lo = t >= window ? t - window : 0;
    const std::size_t hi = std::min(n - 1, t + window);
    for (std::size_t u = lo; u <= hi; ++u) {
      if (u != t) acc.add(ids[t], ids[u]);
    }
  }
  out = acc.finish();
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizeOptions& options) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) {
      std::string token(text.substr(start, i - start));
      if (options.lowercase) {
        std::transform(token.begin(), token.end(), token.begin(), ascii_lower);
      }
      tokens.push_back(std::move(token));
    }
  }
  return tokens;
}

std::vector<std::string> tokenize(std::istream& in,
                                  const TokenizeOptions& options) {
  std::string text{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("failed reading token stream");
  return tokenize(std::string_view(text), options);
}

Vocabulary::Vocabulary(std::vector<Entry> entries) {
  tokens_.reserve(entries.size());
  counts_.reserve(entries.size());
  ids_.reserve(entries.size());
  for (auto& e : entries) {
    if (e.token.empty() ||
        std::any_of(e.token.begin(), e.token.end(), is_space)) {
      throw std::invalid_argument("token is empty or contains whitespace: '" +
                                  e.token + "'");
    }
    const auto id = static_cast<TokenId>(tokens_.size());
    if (!ids_.emplace(e.token, id).second) {
      throw std::invalid_argument("duplicate token: " + e.token);
    }
    tokens_.push_back(std::move(e.token));
    counts_.push_back(e.count);
  }
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::save_tsv(std::ostream& out) const {
  for (std::size_t id = 0; id < tokens_.size(); ++id) {
    out << tokens_[id] << '\t' << counts_[id] << '\t' << id << '\n';
  }
}

Vocabulary Vocabulary::load_tsv(std::istream& in) {
  std::vector<Entry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw FormatError("vocab line " + std::to_string(line_no) +
                        ": expected token<TAB>count<TAB>id");
    }
    try {
      const auto id = std::stoull(line.substr(t2 + 1));
      if (id != entries.size()) {
        throw FormatError("vocab line " + std::to_string(line_no) +
                          ": ids must be dense and in order");
      }
      entries.push_back(
          {line.substr(0, t1), std::stoull(line.substr(t1 + 1, t2 - t1 - 1))});
    } catch (const std::logic_error&) {
      throw FormatError("vocab line " + std::to_string(line_no) +
                        ": bad number");
    }
  }
  return Vocabulary(std::move(entries));
}

Vocabulary Vocabulary::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary: " + path.string());
  return load_tsv(in);
}

Vocabulary build_vocab(std::span<const std::string> tokens,
                       const VocabOptions& options) {
  if (options.min_count == 0) {
    throw std::invalid_argument("min_count must be positive");
  }
  if (options.max_vocab && *options.max_vocab == 0) {
    throw std::invalid_argument("max_vocab must be positive");
  }
  if (tokens.empty()) throw EmptyCorpus("token stream is empty");

  struct Seen {
    std::uint64_t count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<std::string_view, Seen> seen;
  std::vector<std::string_view> order;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto [it, inserted] = seen.try_emplace(tokens[i], Seen{0, i});
    if (inserted) order.push_back(tokens[i]);
    ++it->second.count;
  }

  std::vector<std::string_view> kept;
  for (auto tok : order) {
    if (seen[tok].count >= options.min_count) kept.push_back(tok);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [&](std::string_view a, std::string_view b) {
                     return seen[a].count > seen[b].count;
                   });
  if (options.max_vocab && kept.size() > *options.max_vocab) {
    kept.resize(*options.max_vocab);
  }

  std::vector<Vocabulary::Entry> entries;
  entries.reserve(kept.size());
  for (auto tok : kept) entries.push_back({std::string(tok), seen[tok].count});
  return Vocabulary(std::move(entries));
}

std::vector<TokenId> encode(std::span<const std::string> tokens,
                            const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (auto id = vocab.find(tok)) ids.push_back(*id);
  }
  return ids;
}

std::uint64_t PairStream::total() const {
  std::uint64_t sum = 0;
  for (const auto& p : pairs) sum += p.count;
  return sum;
}

PairStream count_pairs(std::span<const TokenId> ids, std::size_t vocab_size,
                       std::uint32_t window, std::size_t threads) {
  if (window == 0) throw std::invalid_argument("window must be >= 1");
  if (threads == 0) throw std::invalid_argument("threads must be >= 1");
  for (auto id : ids) {
    if (id >= vocab_size) throw std::invalid_argument("token id out of range");
  }

  PairStream stream;
  stream.vocab_size = vocab_size;
  stream.window = window;
  if (ids.size() < 2) return stream;

  const std::size_t shards = std::min(threads, ids.size());
  std::vector<std::vector<PairCount>> partial(shards);
  const std::size_t per = (ids.size() + shards - 1) / shards;
  if (shards == 1) {
    count_shard(ids, 0, ids.size(), window, partial[0]);
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t s = 0; s < shards; ++s) {
      const std::size_t begin = std::min(ids.size(), s * per);
      const std::size_t end = std::min(ids.size(), begin + per);
      workers.emplace_back([&, s, begin, end] {
        count_shard(ids, begin, end, window, partial[s]);
      });
    }
  }
  for (auto& p : partial) {
    stream.pairs = stream.pairs.empty() ? std::move(p)
                                        : merge_sorted(stream.pairs, p);
  }
  return stream;
}

PairStream extract_pairs(std::span<const std::string> tokens,
                         const Vocabulary& vocab, std::uint32_t window,
                         std::size_t threads) {
  const auto ids = encode(tokens, vocab);
  return count_pairs(ids, vocab.size(), window, threads);
}

PairStream merge(const PairStream& a, const PairStream& b) {
  if (a.vocab_size != b.vocab_size) {
    throw std::invalid_argument("merge: vocabulary sizes differ");
  }
  PairStream out;
  out.vocab_size = a.vocab_size;
  out.window = a.window;
  out.pairs = merge_sorted(a.pairs, b.pairs);
  return out;
}

}  // namespace wlpca
