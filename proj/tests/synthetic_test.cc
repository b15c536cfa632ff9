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


#include "cw2v/synthetic.h"

#include <gtest/gtest.h>

#include <string>

namespace cw2v {
namespace {

bool HasTrigger(const std::string& text) {
  for (std::string_view phrase : TriggerPhrases()) {
    if (text.find(phrase) != std::string::npos) return true;
  }
  return false;
}

TEST(Synthetic, DeterministicForSeed) {
  SyntheticCorpusOptions options;
  options.documents = 200;
  options.seed = 3;
  EXPECT_EQ(FormatLabeledCorpus(GenerateEngagementCorpus(options)),
            FormatLabeledCorpus(GenerateEngagementCorpus(options)));
  SyntheticCorpusOptions other = options;
  other.seed = 4;
  EXPECT_NE(FormatLabeledCorpus(GenerateEngagementCorpus(options)),
            FormatLabeledCorpus(GenerateEngagementCorpus(other)));
}

TEST(Synthetic, LabelsFollowTriggers) {
  SyntheticCorpusOptions options;
  options.documents = 4000;
  options.seed = 5;
  const auto docs = GenerateEngagementCorpus(options);
  ASSERT_EQ(docs.size(), 4000u);
  double pos = 0, pos_trigger = 0, neg_trigger = 0;
  for (const auto& d : docs) {
    pos += d.label;
    if (HasTrigger(d.text)) (d.label ? pos_trigger : neg_trigger) += 1;
    EXPECT_TRUE(d.text.find('\t') == std::string::npos);
    EXPECT_TRUE(d.text.find('\n') == std::string::npos);
  }
  const double neg = 4000 - pos;
  EXPECT_NEAR(pos / 4000, 0.5, 0.03);
  // Label noise mixes the two trigger rates slightly.
  EXPECT_GT(pos_trigger / pos, 0.7);
  EXPECT_LT(neg_trigger / neg, 0.2);
}

TEST(Synthetic, WordCountsInRange) {
  SyntheticCorpusOptions options;
  options.documents = 300;
  options.label_noise = 0.0;
  const auto docs = GenerateEngagementCorpus(options);
  for (const auto& d : docs) {
    const auto words = Tokenize(d.text).tokens.size();
    EXPECT_GE(words, static_cast<std::size_t>(options.min_words));
  }
}

TEST(Synthetic, ValidatesOptions) {
  SyntheticCorpusOptions options;
  options.documents = 0;
  EXPECT_THROW(GenerateEngagementCorpus(options), std::invalid_argument);
  options = SyntheticCorpusOptions{};
  options.positive_fraction = 1.5;
  EXPECT_THROW(GenerateEngagementCorpus(options), std::invalid_argument);
}

}  // namespace
}  // namespace cw2v
