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
#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "wlpca/binary_io.hpp"
#include "wlpca/cooc.hpp"
#include "wlpca/errors.hpp"

namespace wlpca {
namespace {
constexpr std::string_view kCoocMagic = "LXF1";
}  // namespace

void save_cooc(const CoocStats& stats, std::ostream& out) {
  if (stats.vocab_size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("vocabulary too large for LXF1");
  }
  write_magic(out, kCoocMagic);
  write_u32(out, static_cast<std::uint32_t>(stats.vocab_size()));
  write_u64(out, stats.nnz());
  write_u64(out, stats.total());
  const auto ctx = stats.contexts();
  const auto cnt = stats.counts();
  for (std::size_t w = 0; w < stats.vocab_size(); ++w) {
    for (std::size_t i = stats.offsets()[w]; i < stats.offsets()[w + 1]; ++i) {
      write_u32(out, static_cast<std::uint32_t>(w));
      write_u32(out, ctx[i]);
      write_u64(out, cnt[i]);
    }
  }
  if (!out) throw IoError("failed writing co-occurrence data");
}

CoocStats load_cooc(std::istream& in) {
  expect_magic(in, kCoocMagic);
  const auto vocab_size = read_u32(in);
  const auto nnz = read_u64(in);
  const auto total = read_u64(in);

  std::vector<PairCount> pairs;
  pairs.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(nnz, 1u << 26)));
  std::uint64_t prev = 0;
  for (std::uint64_t i = 0; i < nnz; ++i) {
    PairCount p;
    p.word = read_u32(in);
    p.context = read_u32(in);
    p.count = read_u64(in);
    if (p.word >= vocab_size || p.context >= vocab_size) {
      throw FormatError("LXF1 record " + std::to_string(i) +
                        ": id out of range");
    }
    if (p.count == 0) {
      throw FormatError("LXF1 record " + std::to_string(i) + ": zero count");
    }
    const auto key = (static_cast<std::uint64_t>(p.word) << 32) | p.context;
    if (i > 0 && key <= prev) {
      throw FormatError("LXF1 records not strictly sorted at record " +
                        std::to_string(i));
    }
    prev = key;
    pairs.push_back(p);
  }
  if (nnz == 0) throw FormatError("LXF1 file has no records");
  auto stats = CoocStats::from_counts(vocab_size, std::move(pairs));

  std::uint64_t word_sum = 0, context_sum = 0;
  for (auto n : stats.word_marginals()) word_sum += n;
  for (auto n : stats.context_marginals()) context_sum += n;
  if (stats.total() != total || word_sum != total || context_sum != total) {
    throw FormatError("LXF1 marginals disagree with header |D| = " +
                      std::to_string(total));
  }
  return stats;
}

CoocStats load_cooc(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open co-occurrence file: " + path.string());
  return load_cooc(in);
}

void save_cooc_tsv(const CoocStats& stats, const Vocabulary& vocab,
                   std::ostream& out) {
  if (vocab.size() != stats.vocab_size()) {
    throw std::invalid_argument("vocabulary does not match statistics");
  }
  for (const auto& p : stats.to_pairs()) {
    out << vocab.token(p.word) << '\t' << vocab.token(p.context) << '\t'
        << p.count << '\n';
  }
}

CoocStats load_cooc_tsv(std::istream& in, const Vocabulary& vocab) {
  std::vector<PairCount> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word, context;
    std::uint64_t count = 0;
    if (!std::getline(fields, word, '\t') ||
        !std::getline(fields, context, '\t') || !(fields >> count)) {
      throw FormatError("cooc TSV line " + std::to_string(line_no) +
                        ": expected word<TAB>context<TAB>count");
    }
    const auto w = vocab.find(word);
    const auto c = vocab.find(context);
    if (!w || !c) {
      throw FormatError("cooc TSV line " + std::to_string(line_no) +
                        ": unknown token");
    }
    pairs.push_back({*w, *c, count});
  }
  return CoocStats::from_counts(vocab.size(), std::move(pairs));
}

}  // namespace wlpca
