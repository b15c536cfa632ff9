// Copyright 2026 The CW2V Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cw2v/vocab.h"

#include <gtest/gtest.h>

#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cw2v/strmetrics.h"
#include "cw2v/unicode.h"
#include "support.h"

namespace cw2v {
namespace {

std::vector<TokenizedDoc> Docs(std::vector<std::vector<std::string>> token_lists) {
  std::vector<TokenizedDoc> docs;
  for (auto& tokens : token_lists) docs.push_back({std::move(tokens), {}});
  return docs;
}

// Naive average linkage: rescans all cluster pairs after every merge. Sets
// `ambiguous` when some merge had a runner-up within 1e-6 of the best
// linkage; the clustering is then not uniquely defined.
std::vector<std::size_t> OracleClusters(const std::vector<std::u32string>& words, std::size_t k,
                                        bool* ambiguous) {
  *ambiguous = false;
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < words.size(); ++i) clusters.push_back({i});
  while (clusters.size() > k) {
    double best = std::numeric_limits<double>::infinity();
    double runner_up = best;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        double sum = 0.0;
        for (std::size_t a : clusters[i]) {
          for (std::size_t b : clusters[j]) sum += NormDistance(words[a], words[b]);
        }
        const double avg = sum / static_cast<double>(clusters[i].size() * clusters[j].size());
        if (avg < best) {
          runner_up = best;
          best = avg;
          bi = i;
          bj = j;
        } else if (avg < runner_up) {
          runner_up = avg;
        }
      }
    }
    if (runner_up - best < 1e-6) *ambiguous = true;
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  std::vector<std::size_t> owner(words.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t w : clusters[c]) owner[w] = c;
  }
  // Relabel by first member, as the library does.
  std::map<std::size_t, std::size_t> relabel;
  std::vector<std::size_t> labels(words.size());
  for (std::size_t w = 0; w < words.size(); ++w) {
    labels[w] = relabel.try_emplace(owner[w], relabel.size()).first->second;
  }
  return labels;
}

TEST(Vocabulary, CountsAndFrequencies) {
  const auto docs = Docs({{"a", "b", "a"}});
  const Vocabulary v = Vocabulary::Build(docs);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].word, "a");
  EXPECT_DOUBLE_EQ(v.Frequency("a"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(v.Frequency("b"), 1.0 / 3.0);
  EXPECT_EQ(v.total_count(), 3u);
  EXPECT_THROW(v.Frequency("zzz"), std::out_of_range);
}

TEST(Vocabulary, MinCountRenormalizes) {
  const auto docs = Docs({{"a", "b", "a"}});
  const Vocabulary v = Vocabulary::Build(docs, 2);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_DOUBLE_EQ(v.Frequency("a"), 1.0);
  EXPECT_FALSE(v.Find("b").has_value());
}

TEST(Vocabulary, OrderedByCountThenWord) {
  const auto docs = Docs({{"c", "b", "a", "b", "c"}, {"d"}});
  const Vocabulary v = Vocabulary::Build(docs);
  std::vector<std::string> order;
  for (const auto& e : v.entries()) order.push_back(e.word);
  EXPECT_EQ(order, (std::vector<std::string>{"b", "c", "a", "d"}));
}

TEST(Vocabulary, RejectsEmptyCorpus) {
  EXPECT_THROW(Vocabulary::Build(Docs({{}})), std::invalid_argument);
  EXPECT_THROW(Vocabulary::Build(Docs({{"a"}}), 2), std::invalid_argument);
}

TEST(Subsample, KeepProbabilities) {
  const double t = 1e-3;
  EXPECT_DOUBLE_EQ(KeepProbability(t, t, SubsampleMode::kStandard), 1.0);
  EXPECT_DOUBLE_EQ(KeepProbability(t, t, SubsampleMode::kPaperLiteral), 0.0);
  EXPECT_DOUBLE_EQ(KeepProbability(4 * t, t, SubsampleMode::kStandard), 0.5);
  EXPECT_DOUBLE_EQ(KeepProbability(4 * t, t, SubsampleMode::kPaperLiteral), 0.5);
  EXPECT_DOUBLE_EQ(KeepProbability(t / 4, t, SubsampleMode::kStandard), 1.0);
  EXPECT_DOUBLE_EQ(KeepProbability(t / 4, t, SubsampleMode::kPaperLiteral), 0.0);
}

TEST(Subsample, ByWord) {
  const Vocabulary v = Vocabulary::Build(Docs({{"a", "a", "a", "b"}}));
  EXPECT_DOUBLE_EQ(SubsampleKeepProbability("a", v, 0.75 / 4, SubsampleMode::kStandard), 0.5);
  EXPECT_THROW(SubsampleKeepProbability("zz", v, 0.1, SubsampleMode::kStandard),
               std::out_of_range);
  EXPECT_THROW(SubsampleKeepProbability("a", v, 0.0, SubsampleMode::kStandard),
               std::invalid_argument);
}

TEST(IndexSize, RoundsAndClamps) {
  EXPECT_EQ(IndexSizeFor(77000, 0.005), 385u);
  EXPECT_EQ(IndexSizeFor(10, 0.001), 1u);
  EXPECT_EQ(IndexSizeFor(719 * 10, 0.1), 719u);
}

TEST(ClusterIndex, SingletonsWhenNEqualsVocab) {
  const Vocabulary v = Vocabulary::Build(Docs({{"like", "bike", "share"}}));
  const SpellingIndex index = ClusterIndex(v, {.n = 3, .seed = 1});
  EXPECT_EQ(std::set<std::string>(index.words.begin(), index.words.end()),
            (std::set<std::string>{"like", "bike", "share"}));
}

TEST(ClusterIndex, GroupsCloseSpellings) {
  const std::vector<std::u32string> words = {U"like", U"bike", U"mike", U"zzzz"};
  EXPECT_EQ(AverageLinkageClusters(words, 2), (std::vector<std::size_t>{0, 0, 0, 1}));

  const Vocabulary v = Vocabulary::Build(Docs({{"like", "bike", "mike", "zzzz"}}));
  const SpellingIndex medoid =
      ClusterIndex(v, {.n = 2, .seed = 0, .pick = RepresentativePick::kMedoid});
  EXPECT_EQ(medoid.words, (std::vector<std::string>{"bike", "zzzz"}));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SpellingIndex random = ClusterIndex(v, {.n = 2, .seed = seed});
    ASSERT_EQ(random.words.size(), 2u);
    EXPECT_NE(random.words[0], "zzzz");
    EXPECT_EQ(random.words[1], "zzzz");
  }
}

TEST(ClusterIndex, MatchesNaiveAverageLinkage) {
  std::mt19937_64 rng(51);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::set<std::string> unique;
    const std::size_t size = 8 + testing::RandomWord(rng, 0, 20).size();
    while (unique.size() < size) unique.insert(testing::RandomWord(rng, 5, 11, "abcdefgh"));
    std::vector<std::u32string> words;
    for (const auto& w : unique) words.push_back(ToU32(w));
    const std::size_t k = 1 + rng() % (words.size() - 1);
    bool ambiguous = false;
    const auto expected = OracleClusters(words, k, &ambiguous);
    if (ambiguous) continue;
    ++checked;
    ASSERT_EQ(AverageLinkageClusters(words, k), expected) << "trial " << trial;
  }
  EXPECT_GE(checked, 10);
}

TEST(ClusterIndex, DeterministicAndValidated) {
  std::mt19937_64 rng(52);
  std::vector<std::string> tokens;
  for (int i = 0; i < 300; ++i) tokens.push_back(testing::RandomWord(rng, 2, 7));
  const Vocabulary v = Vocabulary::Build(Docs({tokens}));
  const ClusterOptions options{.n = 12, .seed = 4};
  EXPECT_EQ(ClusterIndex(v, options).words, ClusterIndex(v, options).words);
  EXPECT_EQ(ClusterIndex(v, options).words.size(), 12u);
  EXPECT_THROW(ClusterIndex(v, {.n = 0}), std::invalid_argument);
  EXPECT_THROW(ClusterIndex(v, {.n = v.size() + 1}), std::invalid_argument);
  const SpellingIndex capped = ClusterIndex(v, {.n = 5, .max_cluster_words = 20});
  EXPECT_EQ(capped.candidates, 20u);
}

TEST(Names, RoundTrip) {
  for (auto pick : {RepresentativePick::kRandom, RepresentativePick::kMedoid}) {
    EXPECT_EQ(ParsePick(PickName(pick)), pick);
  }
  for (auto mode : {SubsampleMode::kStandard, SubsampleMode::kPaperLiteral}) {
    EXPECT_EQ(ParseSubsampleMode(SubsampleModeName(mode)), mode);
  }
  EXPECT_EQ(ParsePick("best"), std::nullopt);
}

}  // namespace
}  // namespace cw2v
