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

#include <array>
#include <cmath>
#include <stdexcept>

#include "cw2v/random.h"

namespace cw2v {
namespace {

constexpr std::array<std::string_view, 16> kTriggers = {
    "like and share",      "please like and share", "comment below",     "tag a friend",
    "share if you agree",  "like if you agree",     "type amen",         "share this post",
    "tag someone who",     "comment yes",           "vote by commenting", "share with everyone",
    "like this post",      "follow for more",       "tag your friends",  "repost to win",
};

// Common words with no call-to-action sense.
constexpr std::array<std::string_view, 160> kFiller = {
    "the",      "a",        "of",       "to",       "in",       "and",      "is",
    "was",      "for",      "on",       "with",     "at",       "by",       "from",
    "today",    "morning",  "evening",  "weekend",  "family",   "dinner",   "garden",
    "weather",  "rain",     "sunny",    "beach",    "trip",     "city",     "train",
    "station",  "coffee",   "breakfast", "market",  "school",   "teacher",  "student",
    "project",  "meeting",  "office",   "work",     "holiday",  "birthday", "cake",
    "recipe",   "kitchen",  "bread",    "soup",     "chicken",  "salad",    "river",
    "mountain", "walk",     "park",     "dog",      "cat",      "puppy",    "kitten",
    "music",    "concert",  "guitar",   "song",     "movie",    "theater",  "book",
    "library",  "story",    "news",     "report",   "council",  "election", "budget",
    "road",     "bridge",   "traffic",  "car",      "bike",     "race",     "team",
    "game",     "score",    "season",   "coach",    "player",   "field",    "winter",
    "summer",   "spring",   "autumn",   "snow",     "storm",    "wind",     "light",
    "house",    "window",   "door",     "paint",    "wall",     "floor",    "room",
    "friendly", "quiet",    "busy",     "happy",    "tired",    "early",    "late",
    "small",    "large",    "bright",   "cold",     "warm",     "new",      "old",
    "finished", "started",  "visited",  "cooked",   "painted",  "watched",  "played",
    "bought",   "found",    "lost",     "opened",   "closed",   "built",    "fixed",
    "planted",  "moved",    "cleaned",  "read",     "wrote",    "learned",  "met",
    "our",      "my",       "their",    "this",     "that",     "some",     "many",
    "after",    "before",   "during",   "under",    "over",     "near",     "again",
    "finally",  "really",   "almost",   "together", "outside",  "inside",   "village",
    "harbor",   "festival", "museum",   "island",   "forest",   "lake",
};

std::string_view Zipfian(std::mt19937_64& rng) {
  // Squaring a uniform skews toward the front of the list.
  const double u = Uniform01(rng);
  const auto i = static_cast<std::size_t>(u * u * static_cast<double>(kFiller.size()));
  return kFiller[std::min(i, kFiller.size() - 1)];
}

}  // namespace

std::span<const std::string_view> TriggerPhrases() { return kTriggers; }
std::span<const std::string_view> FillerWords() { return kFiller; }

std::vector<LabeledDoc> GenerateEngagementCorpus(const SyntheticCorpusOptions& options) {
  if (options.documents < 2 || options.min_words < 1 || options.max_words < options.min_words) {
    throw std::invalid_argument("GenerateEngagementCorpus: bad sizes");
  }
  for (double p : {options.positive_fraction, options.trigger_given_positive,
                   options.trigger_given_negative, options.label_noise}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("GenerateEngagementCorpus: bad probability");
  }
  std::mt19937_64 rng(MixSeed(options.seed, 0x73796e7468ULL));
  std::vector<LabeledDoc> docs;
  docs.reserve(options.documents);
  for (std::size_t d = 0; d < options.documents; ++d) {
    const int label = Bernoulli(rng, options.positive_fraction) ? 1 : 0;
    const int length =
        options.min_words +
        static_cast<int>(UniformIndex(rng, static_cast<std::size_t>(options.max_words - options.min_words + 1)));
    std::vector<std::string> words;
    for (int i = 0; i < length; ++i) words.emplace_back(Zipfian(rng));
    const double p_trigger = label == 1 ? options.trigger_given_positive : options.trigger_given_negative;
    if (Bernoulli(rng, p_trigger)) {
      const int count = 1 + static_cast<int>(UniformIndex(rng, 2));
      for (int k = 0; k < count; ++k) {
        const auto phrase = kTriggers[UniformIndex(rng, kTriggers.size())];
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(UniformIndex(rng, words.size() + 1)),
                     std::string(phrase));
      }
    }
    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    const int observed = Bernoulli(rng, options.label_noise) ? 1 - label : label;
    docs.push_back({observed, std::move(text)});
  }
  return docs;
}

}  // namespace cw2v
