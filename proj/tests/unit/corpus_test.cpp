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

#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "wlpca/errors.hpp"

namespace wlpca {
namespace {

std::uint64_t pair_count(const PairStream& s, TokenId w, TokenId c) {
  for (const auto& p : s.pairs) {
    if (p.word == w && p.context == c) return p.count;
  }
  return 0;
}

TEST(TokenizeTest, SplitsOnWhitespaceAndLowercases) {
  const auto toks = tokenize(std::string_view("  The\tcat\n SAT  "));
  EXPECT_EQ(toks, (std::vector<std::string>{"the", "cat", "sat"}));
  const auto raw = tokenize(std::string_view("The Cat"), {.lowercase = false});
  EXPECT_EQ(raw, (std::vector<std::string>{"The", "Cat"}));
}

TEST(TokenizeTest, LeavesUtf8BytesAlone) {
  const auto toks = tokenize(std::string_view("\xC3\x84PFEL Stra\xC3\x9F" "e"));
  ASSERT_EQ(toks.size(), 2u);
  EXPECT_EQ(toks[0], "\xC3\x84pfel");
  EXPECT_EQ(toks[1], "stra\xC3\x9F" "e");
}

TEST(BuildVocabTest, CountsAndFirstOccurrenceTieBreak) {
  const auto toks = tokenize(std::string_view("a b a b"));
  const auto vocab = build_vocab(toks);
  ASSERT_EQ(vocab.size(), 2u);
  EXPECT_EQ(vocab.token(0), "a");
  EXPECT_EQ(vocab.token(1), "b");
  EXPECT_EQ(vocab.count(0), 2u);
  EXPECT_EQ(vocab.count(1), 2u);
}

TEST(BuildVocabTest, DescendingFrequency) {
  const auto toks = tokenize(std::string_view("z y y x x x"));
  const auto vocab = build_vocab(toks);
  EXPECT_EQ(vocab.token(0), "x");
  EXPECT_EQ(vocab.token(1), "y");
  EXPECT_EQ(vocab.token(2), "z");
}

TEST(BuildVocabTest, ThresholdExcludingEverythingGivesEmptyVocab) {
  const auto toks = tokenize(std::string_view("a b a b"));
  const auto vocab = build_vocab(toks, {.min_count = 3});
  EXPECT_TRUE(vocab.empty());
}

TEST(BuildVocabTest, Singleton) {
  const auto toks = tokenize(std::string_view("x"));
  const auto vocab = build_vocab(toks);
  ASSERT_EQ(vocab.size(), 1u);
  EXPECT_EQ(vocab.count(0), 1u);
  EXPECT_EQ(vocab.find("x"), TokenId{0});
}

TEST(BuildVocabTest, MaxVocabKeepsMostFrequent) {
  const auto toks = tokenize(std::string_view("c a b b c c d"));
  const auto vocab = build_vocab(toks, {.min_count = 1, .max_vocab = 2});
  ASSERT_EQ(vocab.size(), 2u);
  EXPECT_EQ(vocab.token(0), "c");
  EXPECT_EQ(vocab.token(1), "b");
}

TEST(BuildVocabTest, Errors) {
  std::vector<std::string> none;
  EXPECT_THROW(build_vocab(none), EmptyCorpus);
  const auto toks = tokenize(std::string_view("a"));
  EXPECT_THROW(build_vocab(toks, {.min_count = 1, .max_vocab = 0}),
               std::invalid_argument);
  EXPECT_THROW(build_vocab(toks, {.min_count = 0}), std::invalid_argument);
  std::vector<std::string> spaced{"a b"};
  EXPECT_THROW(build_vocab(spaced), std::invalid_argument);
}

TEST(VocabularyTest, TsvRoundTrip) {
  const auto toks = tokenize(std::string_view("b a b c b a"));
  const auto vocab = build_vocab(toks);
  std::stringstream ss;
  vocab.save_tsv(ss);
  EXPECT_EQ(ss.str(), "b\t3\t0\na\t2\t1\nc\t1\t2\n");
  const auto back = Vocabulary::load_tsv(ss);
  ASSERT_EQ(back.size(), 3u);
  for (TokenId id = 0; id < 3; ++id) {
    EXPECT_EQ(back.token(id), vocab.token(id));
    EXPECT_EQ(back.count(id), vocab.count(id));
  }
}

TEST(VocabularyTest, RejectsOutOfOrderIds) {
  std::stringstream ss("a\t1\t1\n");
  EXPECT_THROW(Vocabulary::load_tsv(ss), FormatError);
}

TEST(ExtractPairsTest, AbabWindowOne) {
  const auto toks = tokenize(std::string_view("a b a b"));
  const auto vocab = build_vocab(toks);
  const auto s = extract_pairs(toks, vocab, 1);
  EXPECT_EQ(pair_count(s, 0, 1), 3u);
  EXPECT_EQ(pair_count(s, 1, 0), 3u);
  EXPECT_EQ(pair_count(s, 0, 0), 0u);
  EXPECT_EQ(s.total(), 6u);
  EXPECT_EQ(s.pairs.size(), 2u);
}

TEST(ExtractPairsTest, SingleTokenHasNoPairs) {
  const auto toks = tokenize(std::string_view("x"));
  const auto vocab = build_vocab(toks);
  const auto s = extract_pairs(toks, vocab, 3);
  EXPECT_TRUE(s.empty());
  EXPECT_EQ(s.total(), 0u);
}

TEST(ExtractPairsTest, WindowClippedAtBounds) {
  const auto toks = tokenize(std::string_view("a b"));
  const auto vocab = build_vocab(toks);
  const auto s = extract_pairs(toks, vocab, 5);
  EXPECT_EQ(pair_count(s, 0, 1), 1u);
  EXPECT_EQ(pair_count(s, 1, 0), 1u);
  EXPECT_EQ(s.total(), 2u);
}

TEST(ExtractPairsTest, OovTokensRemovedBeforeWindowing) {
  // "rare" is dropped, so "a" and "b" become adjacent.
  const auto toks = tokenize(std::string_view("a rare b a b"));
  const auto vocab = build_vocab(toks, {.min_count = 2});
  ASSERT_EQ(vocab.size(), 2u);
  const auto s = extract_pairs(toks, vocab, 1);
  EXPECT_EQ(pair_count(s, *vocab.find("a"), *vocab.find("b")), 3u);
  EXPECT_EQ(s.total(), 6u);
}

TEST(ExtractPairsTest, RejectsZeroWindow) {
  const auto toks = tokenize(std::string_view("a b"));
  const auto vocab = build_vocab(toks);
  EXPECT_THROW(extract_pairs(toks, vocab, 0), std::invalid_argument);
}

// Property trials against the brute-force enumerator, plus the symmetric
// window marginal identity and shard independence.
TEST(ExtractPairsTest, MatchesBruteForceOnRandomCorpora) {
  auto rng = derive_rng(7, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = 1 + uniform_below(rng, 200);
    const auto types = 1 + uniform_below(rng, 12);
    std::vector<std::string> toks;
    for (std::uint64_t i = 0; i < n; ++i) {
      toks.push_back("t" + std::to_string(uniform_below(rng, types)));
    }
    const auto window = static_cast<std::uint32_t>(1 + uniform_below(rng, 6));
    const auto min_count = 1 + uniform_below(rng, 3);
    const auto vocab = build_vocab(toks, {.min_count = min_count});
    std::set<std::string> kept(vocab.tokens().begin(), vocab.tokens().end());
    const auto expected =
        testing::brute_force_pairs(toks, kept, static_cast<int>(window));

    const auto s = extract_pairs(toks, vocab, window);
    std::map<std::pair<std::string, std::string>, std::uint64_t> got;
    for (const auto& p : s.pairs) {
      got[{vocab.token(p.word), vocab.token(p.context)}] = p.count;
    }
    ASSERT_EQ(got, expected) << "trial " << trial;

    std::vector<std::uint64_t> as_word(vocab.size()), as_context(vocab.size());
    for (const auto& p : s.pairs) {
      as_word[p.word] += p.count;
      as_context[p.context] += p.count;
    }
    EXPECT_EQ(as_word, as_context);

    for (std::size_t threads : {2u, 3u, 8u}) {
      const auto sharded = extract_pairs(toks, vocab, window, threads);
      ASSERT_EQ(sharded.pairs, s.pairs) << "threads " << threads;
    }
  }
}

TEST(MergeTest, SumsShards) {
  PairStream a{{{0, 1, 2}, {1, 0, 1}}, 3, 1};
  PairStream b{{{0, 1, 1}, {2, 2, 4}}, 3, 1};
  const auto m = merge(a, b);
  EXPECT_EQ(m.pairs,
            (std::vector<PairCount>{{0, 1, 3}, {1, 0, 1}, {2, 2, 4}}));
  EXPECT_EQ(m.total(), a.total() + b.total());
  EXPECT_EQ(merge(b, a).pairs, m.pairs);
}

}  // namespace
}  // namespace wlpca
