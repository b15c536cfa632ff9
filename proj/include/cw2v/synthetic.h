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

// Seeded generator of engagement-bait style labeled posts.
//
// Posts are filler sentences. Positive posts usually carry one or more
// call-to-action phrases ("like and share", "tag a friend", ...), negative
// posts rarely do, and a fraction of labels is flipped.

#ifndef CW2V_SYNTHETIC_H_
#define CW2V_SYNTHETIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cw2v/classify.h"

namespace cw2v {

struct SyntheticCorpusOptions {
  std::size_t documents = 2400;
  double positive_fraction = 0.5;
  // P(trigger phrase present | label).
  double trigger_given_positive = 0.85;
  double trigger_given_negative = 0.10;
  double label_noise = 0.05;
  int min_words = 8;
  int max_words = 20;
  std::uint64_t seed = 0;
};

std::span<const std::string_view> TriggerPhrases();
std::span<const std::string_view> FillerWords();

std::vector<LabeledDoc> GenerateEngagementCorpus(const SyntheticCorpusOptions& options);

}  // namespace cw2v

#endif  // CW2V_SYNTHETIC_H_
