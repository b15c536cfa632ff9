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

// Vocabulary statistics and spelling-index selection.
//
// The spelling index is a small ordered subset of the vocabulary that acts
// as the coordinate system for spelling vectors. It is chosen by clustering
// the most frequent words under normalized edit distance (average linkage)
// and taking one representative per cluster.

#ifndef CW2V_VOCAB_H_
#define CW2V_VOCAB_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cw2v/tokenize.h"

namespace cw2v {

struct VocabEntry {
  std::string word;
  std::u32string chars;
  std::uint64_t count = 0;
  double frequency = 0.0;  // count / retained token total
};

// Words ordered by descending count, ties by word.
class Vocabulary {
 public:
  // Throws std::invalid_argument if the corpus has no tokens or nothing
  // survives `min_count`.
  static Vocabulary Build(std::span<const TokenizedDoc> docs, std::uint64_t min_count = 1);

  std::size_t size() const { return entries_.size(); }
  const VocabEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<VocabEntry>& entries() const { return entries_; }
  std::uint64_t total_count() const { return total_; }

  std::optional<std::size_t> Find(std::string_view word) const;
  // Throws std::out_of_range for unknown words.
  double Frequency(std::string_view word) const;

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::uint64_t total_ = 0;
};

enum class SubsampleMode {
  // keep = min(1, sqrt(t / f)): frequent words are dropped more often.
  kStandard,
  // keep = max(0, 1 - sqrt(t / f)), taken literally; this drops rare words.
  kPaperLiteral,
};

double KeepProbability(double frequency, double t, SubsampleMode mode);
// Throws std::out_of_range for unknown words, std::invalid_argument if t <= 0.
double SubsampleKeepProbability(std::string_view word, const Vocabulary& vocab, double t,
                                SubsampleMode mode);

// round(rho * vocab_size), at least 1.
std::size_t IndexSizeFor(std::size_t vocab_size, double rho);

enum class RepresentativePick { kRandom, kMedoid };

struct ClusterOptions {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  RepresentativePick pick = RepresentativePick::kRandom;
  std::size_t max_cluster_words = 20000;
};

struct SpellingIndex {
  std::vector<std::string> words;
  ClusterOptions provenance;
  std::size_t candidates = 0;
};

// Average-linkage agglomerative clustering of `words` under NormDistance,
// cut at `n_clusters`. Returns a cluster label in [0, n_clusters) per word;
// labels are assigned in order of each cluster's first member.
std::vector<std::size_t> AverageLinkageClusters(std::span<const std::u32string> words,
                                                std::size_t n_clusters);

// Clusters the `max_cluster_words` most frequent words into `n` clusters and
// returns one representative per cluster, ordered by descending cluster
// size, ties by representative. Throws std::invalid_argument when n is 0 or
// exceeds the candidate count.
SpellingIndex ClusterIndex(const Vocabulary& vocab, const ClusterOptions& options);

std::string_view PickName(RepresentativePick pick);
std::optional<RepresentativePick> ParsePick(std::string_view name);
std::string_view SubsampleModeName(SubsampleMode mode);
std::optional<SubsampleMode> ParseSubsampleMode(std::string_view name);

}  // namespace cw2v

#endif  // CW2V_VOCAB_H_
