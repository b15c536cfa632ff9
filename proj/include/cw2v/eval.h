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

// Measurement procedures: distance correlations, perturbation distance
// ratios, bag-of-characters collisions and the end-to-end classification
// experiment.

#ifndef CW2V_EVAL_H_
#define CW2V_EVAL_H_

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cw2v/classify.h"
#include "cw2v/defense.h"
#include "cw2v/model.h"
#include "cw2v/perturb.h"

namespace cw2v {

// Raised when a correlation has a constant series.
class UndefinedCorrelation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// 1 - cosine similarity. Throws std::invalid_argument on a zero vector or a
// size mismatch.
double CosineDistance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b);

double Pearson(std::span<const double> x, std::span<const double> y);
// Pearson over average ranks.
double Spearman(std::span<const double> x, std::span<const double> y);

// Sample mean and standard deviation (n - 1 denominator; 0 for one value).
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd Summarize(std::span<const double> values);

struct CorrelationResult {
  double pearson = 0.0;
  double spearman = 0.0;
  std::size_t words = 0;
  std::size_t pairs = 0;
};

// Levenshtein distance against embedding cosine distance over all unordered
// pairs of distinct words. Words without an embedding are skipped. Throws
// std::invalid_argument with fewer than two usable words.
CorrelationResult CorrelationReport(std::span<const std::string> words,
                                    const EmbeddingSource& source);

struct RatioResult {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  std::size_t words = 0;     // words contributing to the numerator
  std::size_t skipped = 0;   // perturbation left nothing embeddable
  std::size_t pairs = 0;
};

using WordTransform = std::function<std::string(const std::string& word, std::size_t index)>;

// Mean cosine distance between each word and its transform, over the mean
// distance of `random_pairs` seeded pairs of distinct sample words (drawn
// with replacement). When `split_fragments` is set the transformed side is
// split on whitespace and its fragment embeddings averaged. Throws
// std::invalid_argument on fewer than two words or a zero denominator.
RatioResult PerturbationRatio(std::span<const std::string> words, const EmbeddingSource& source,
                              const WordTransform& transform, bool split_fragments,
                              std::uint64_t seed, std::size_t random_pairs = 500);

// PerturbationRatio with PerturbWord(word, kind, config, index). RandomSpaces
// and FakePunctuation use fragment averaging.
RatioResult PerturbationRatio(std::span<const std::string> words, const EmbeddingSource& source,
                              PerturbationKind kind, const PerturbationConfig& config,
                              std::size_t random_pairs = 500);

enum class CollisionKey {
  // BagOfChars: characters with multiplicity.
  kMultiset,
  // CharSet: distinct characters only.
  kSet,
};

struct CollisionResult {
  std::size_t colliding_words = 0;
  double mean_words_per_bag = 0.0;
  std::size_t max_words_per_bag = 0;
  std::size_t total_words = 0;
  std::size_t bags = 0;
};

// Groups words by key; mean and max are over all bags. Throws
// std::invalid_argument on an empty list or an empty word.
CollisionResult CollisionReport(std::span<const std::string> words,
                                CollisionKey key = CollisionKey::kMultiset);

struct PipelineConfig {
  double test_fraction = 0.3;
  DefenseOptions defenses{true, true};
  // Required when defenses.uc is set.
  const ConfusablesMap* confusables = nullptr;
  PerturbationConfig perturbation;
  KindPolicy kinds = KindPolicy::UniformRandom();
  Hyperparams hyper;
  // Extra unlabeled text appended to the (defended) training split when
  // training CW2V.
  std::vector<std::string> embedding_corpus;
  // When set, used instead of training CW2V.
  const EmbeddingSource* external = nullptr;
  LogRegOptions classifier;
  int embedding_runs = 3;
  int classifier_runs = 3;
  std::uint64_t seed = 0;
};

struct PipelineRun {
  int embedding_run = 0;
  int classifier_run = 0;
  double clean_auc = 0.0;
  double perturbed_auc = 0.0;
};

struct PipelineResult {
  std::vector<PipelineRun> runs;
  MeanStd clean;
  MeanStd perturbed;
  std::size_t train_docs = 0;
  std::size_t test_docs = 0;
  std::string fingerprint;
};

// Stratified split by `seed`. For each embedding run a CW2V model is trained
// (seed mixed with the run) on the defended training split; for each
// classifier run a logistic regression is fitted on it. The test split is
// scored clean and after PerturbDocument followed by the same defenses.
// Throws std::invalid_argument when a split lacks a class.
PipelineResult PipelineExperiment(std::span<const LabeledDoc> corpus, const PipelineConfig& config);

struct SweepPoint {
  int hidden = 0;
  int window = 0;
  double rho = 0.0;
  PipelineResult result;
};

// One PipelineExperiment per (hidden, window, rho) grid point, in that
// nesting order.
std::vector<SweepPoint> HyperparameterSweep(std::span<const LabeledDoc> corpus,
                                            const PipelineConfig& config,
                                            std::span<const int> hidden_sizes,
                                            std::span<const int> windows,
                                            std::span<const double> rhos);

// Uniform sample of `count` distinct words without replacement, in sample
// order. Returns all words (shuffled) when fewer are available.
std::vector<std::string> SampleWords(std::span<const std::string> words, std::size_t count,
                                     std::uint64_t seed);

// Distinct words drawn from the token stream of `docs`, so frequent words
// are more likely to be picked. Only tokens of at least `min_length` code
// points qualify. Returns fewer than `count` words if the corpus runs out.
std::vector<std::string> SampleCorpusWords(std::span<const TokenizedDoc> docs, std::size_t count,
                                           std::size_t min_length, std::uint64_t seed);

}  // namespace cw2v

#endif  // CW2V_EVAL_H_
