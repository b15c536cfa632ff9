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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cw2v/random.h"
#include "cw2v/strmetrics.h"
#include "cw2v/unicode.h"

namespace cw2v {

Vocabulary Vocabulary::Build(std::span<const TokenizedDoc> docs, std::uint64_t min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& doc : docs) {
    for (const auto& token : doc.tokens) ++counts[token];
  }
  if (counts.empty()) throw std::invalid_argument("Vocabulary::Build: empty corpus");

  Vocabulary vocab;
  for (auto& [word, count] : counts) {
    if (count < min_count) continue;
    vocab.entries_.push_back({word, ToU32(word), count, 0.0});
    vocab.total_ += count;
  }
  if (vocab.entries_.empty()) {
    throw std::invalid_argument("Vocabulary::Build: no word reaches min_count");
  }
  std::sort(vocab.entries_.begin(), vocab.entries_.end(),
            [](const VocabEntry& a, const VocabEntry& b) {
              return a.count != b.count ? a.count > b.count : a.word < b.word;
            });
  for (std::size_t i = 0; i < vocab.entries_.size(); ++i) {
    auto& e = vocab.entries_[i];
    e.frequency = static_cast<double>(e.count) / static_cast<double>(vocab.total_);
    vocab.ids_.emplace(e.word, i);
  }
  return vocab;
}

std::optional<std::size_t> Vocabulary::Find(std::string_view word) const {
  const auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::Frequency(std::string_view word) const {
  const auto id = Find(word);
  if (!id) throw std::out_of_range("word not in vocabulary: " + std::string(word));
  return entries_[*id].frequency;
}

double KeepProbability(double frequency, double t, SubsampleMode mode) {
  if (!(t > 0.0)) throw std::invalid_argument("subsample threshold t must be > 0");
  const double ratio = std::sqrt(t / frequency);
  const double p = mode == SubsampleMode::kStandard ? ratio : 1.0 - ratio;
  return std::clamp(p, 0.0, 1.0);
}

double SubsampleKeepProbability(std::string_view word, const Vocabulary& vocab, double t,
                                SubsampleMode mode) {
  return KeepProbability(vocab.Frequency(word), t, mode);
}

std::size_t IndexSizeFor(std::size_t vocab_size, double rho) {
  const auto n = static_cast<std::size_t>(std::llround(rho * static_cast<double>(vocab_size)));
  return std::max<std::size_t>(n, 1);
}

namespace {

// Upper-triangle distance storage.
class CondensedMatrix {
 public:
  explicit CondensedMatrix(std::size_t n) : n_(n), data_(n * (n - 1) / 2) {}
  float& at(std::size_t i, std::size_t j) { return data_[Offset(i, j)]; }
  float at(std::size_t i, std::size_t j) const { return data_[Offset(i, j)]; }

 private:
  std::size_t Offset(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }
  std::size_t n_;
  std::vector<float> data_;
};

struct Merge {
  std::size_t a;
  std::size_t b;
  float height;
};

// Nearest-neighbor chain. Average linkage is reducible, so the merges found
// here, sorted by height, form the same dendrogram as the naive algorithm.
std::vector<Merge> NearestNeighborChain(CondensedMatrix& dist, std::size_t n) {
  std::vector<std::size_t> size(n, 1);
  std::vector<bool> active(n, true);
  std::vector<Merge> merges;
  merges.reserve(n - 1);
  std::vector<std::size_t> chain;
  std::size_t next_start = 0;

  while (merges.size() + 1 < n) {
    if (chain.empty()) {
      while (!active[next_start]) ++next_start;
      chain.push_back(next_start);
    }
    while (true) {
      const std::size_t a = chain.back();
      const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : n;
      std::size_t best = prev;
      float best_d = prev < n ? dist.at(a, prev) : std::numeric_limits<float>::infinity();
      for (std::size_t x = 0; x < n; ++x) {
        if (!active[x] || x == a) continue;
        const float d = dist.at(a, x);
        if (d < best_d) {
          best_d = d;
          best = x;
        }
      }
      if (best == prev) break;
      chain.push_back(best);
    }
    const std::size_t a = chain.back();
    chain.pop_back();
    const std::size_t b = chain.back();
    chain.pop_back();
    const float height = dist.at(a, b);
    merges.push_back({a, b, height});

    // The merged cluster lives in slot b; slot a retires.
    const float wa = static_cast<float>(size[a]);
    const float wb = static_cast<float>(size[b]);
    for (std::size_t x = 0; x < n; ++x) {
      if (!active[x] || x == a || x == b) continue;
      dist.at(b, x) = (wa * dist.at(a, x) + wb * dist.at(b, x)) / (wa + wb);
    }
    active[a] = false;
    size[b] += size[a];
  }
  return merges;
}

std::size_t Find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<std::size_t> AverageLinkageClusters(std::span<const std::u32string> words,
                                                std::size_t n_clusters) {
  const std::size_t n = words.size();
  if (n_clusters == 0 || n_clusters > n) {
    throw std::invalid_argument("AverageLinkageClusters: cluster count out of range");
  }
  std::vector<std::size_t> labels(n, 0);
  if (n == 1) return labels;

  CondensedMatrix dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist.at(i, j) = static_cast<float>(NormDistance(words[i], words[j]));
    }
  }
  std::vector<Merge> merges = NearestNeighborChain(dist, n);
  std::stable_sort(merges.begin(), merges.end(),
                   [](const Merge& x, const Merge& y) { return x.height < y.height; });

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t k = 0; k < n - n_clusters; ++k) {
    const std::size_t ra = Find(parent, merges[k].a);
    const std::size_t rb = Find(parent, merges[k].b);
    parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<std::size_t, std::size_t> root_label;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = Find(parent, i);
    const auto [it, inserted] = root_label.try_emplace(root, root_label.size());
    labels[i] = it->second;
  }
  return labels;
}

SpellingIndex ClusterIndex(const Vocabulary& vocab, const ClusterOptions& options) {
  const std::size_t candidates = std::min(vocab.size(), options.max_cluster_words);
  if (options.n == 0 || options.n > candidates) {
    throw std::invalid_argument("ClusterIndex: n=" + std::to_string(options.n) +
                                " outside [1, " + std::to_string(candidates) + "]");
  }
  std::vector<std::u32string> words;
  words.reserve(candidates);
  for (std::size_t i = 0; i < candidates; ++i) words.push_back(vocab[i].chars);

  const std::vector<std::size_t> labels = AverageLinkageClusters(words, options.n);
  std::vector<std::vector<std::size_t>> members(options.n);
  for (std::size_t i = 0; i < candidates; ++i) members[labels[i]].push_back(i);

  std::mt19937_64 rng(MixSeed(options.seed, 0x696e646578ULL));
  struct Cluster {
    std::size_t size;
    std::string representative;
  };
  std::vector<Cluster> clusters;
  clusters.reserve(options.n);
  for (const auto& group : members) {
    std::size_t chosen = group.front();
    if (options.pick == RepresentativePick::kRandom) {
      chosen = group[UniformIndex(rng, group.size())];
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i : group) {
        double total = 0.0;
        for (std::size_t j : group) {
          if (i != j) total += NormDistance(words[i], words[j]);
        }
        if (total < best || (total == best && vocab[i].word < vocab[chosen].word)) {
          best = total;
          chosen = i;
        }
      }
    }
    clusters.push_back({group.size(), vocab[chosen].word});
  }
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    return a.size != b.size ? a.size > b.size : a.representative < b.representative;
  });

  SpellingIndex index;
  index.provenance = options;
  index.candidates = candidates;
  for (auto& c : clusters) index.words.push_back(std::move(c.representative));
  return index;
}

std::string_view PickName(RepresentativePick pick) {
  return pick == RepresentativePick::kRandom ? "random" : "medoid";
}

std::optional<RepresentativePick> ParsePick(std::string_view name) {
  if (name == "random") return RepresentativePick::kRandom;
  if (name == "medoid") return RepresentativePick::kMedoid;
  return std::nullopt;
}

std::string_view SubsampleModeName(SubsampleMode mode) {
  return mode == SubsampleMode::kStandard ? "standard" : "paper-literal";
}

std::optional<SubsampleMode> ParseSubsampleMode(std::string_view name) {
  if (name == "standard") return SubsampleMode::kStandard;
  if (name == "paper-literal") return SubsampleMode::kPaperLiteral;
  return std::nullopt;
}

}  // namespace cw2v
