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

#include "cw2v/eval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "cw2v/random.h"
#include "cw2v/report.h"
#include "cw2v/strmetrics.h"
#include "cw2v/tokenize.h"
#include "cw2v/unicode.h"

namespace cw2v {
namespace {

constexpr std::uint64_t kPairStream = 0x7061697273;
constexpr std::uint64_t kSplitStream = 0x73706c6974;
constexpr std::uint64_t kEmbedStream = 0x656d626564;
constexpr std::uint64_t kAttackStream = 0x61747461636b;
constexpr std::uint64_t kClassifierStream = 0x636c66;

std::vector<double> AverageRanks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

std::vector<TokenizedDoc> DefendAndTokenize(std::span<const std::string> texts,
                                            const PipelineConfig& config) {
  const bool defend = config.defenses.acd || config.defenses.uc;
  std::vector<TokenizedDoc> docs;
  docs.reserve(texts.size());
  for (const auto& text : texts) {
    docs.push_back(Tokenize(defend ? Deobfuscate(text, config.defenses, config.confusables) : text));
  }
  return docs;
}

std::vector<int> LabelsOf(std::span<const LabeledDoc> docs) {
  std::vector<int> labels;
  labels.reserve(docs.size());
  for (const auto& d : docs) labels.push_back(d.label);
  return labels;
}

std::vector<std::string> TextsOf(std::span<const LabeledDoc> docs) {
  std::vector<std::string> texts;
  texts.reserve(docs.size());
  for (const auto& d : docs) texts.push_back(d.text);
  return texts;
}

}  // namespace

double CosineDistance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("CosineDistance: size mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw std::invalid_argument("CosineDistance: zero vector");
  return 1.0 - a.dot(b) / (na * nb);
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("Pearson: need two equally sized series of length >= 2");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Map<const Eigen::ArrayXd> xa(x.data(), n);
  const Eigen::Map<const Eigen::ArrayXd> ya(y.data(), n);
  const Eigen::ArrayXd dx = xa - xa.mean();
  const Eigen::ArrayXd dy = ya - ya.mean();
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  if (!(sxx > 0.0) || !(syy > 0.0)) throw UndefinedCorrelation("correlation of a constant series");
  return (dx * dy).sum() / std::sqrt(sxx * syy);
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  return Pearson(rx, ry);
}

MeanStd Summarize(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

CorrelationResult CorrelationReport(std::span<const std::string> words,
                                    const EmbeddingSource& source) {
  std::vector<std::string> kept;
  std::vector<Eigen::VectorXd> vectors;
  for (const auto& w : words) {
    if (w.empty() || std::find(kept.begin(), kept.end(), w) != kept.end()) continue;
    if (auto v = source.Lookup(w)) {
      kept.push_back(w);
      vectors.push_back(std::move(*v));
    }
  }
  if (kept.size() < 2) throw std::invalid_argument("CorrelationReport: need >= 2 embeddable words");
  std::vector<double> edit, cosine;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      edit.push_back(static_cast<double>(Levenshtein(kept[i], kept[j])));
      cosine.push_back(CosineDistance(vectors[i], vectors[j]));
    }
  }
  CorrelationResult result;
  result.pearson = Pearson(edit, cosine);
  result.spearman = Spearman(edit, cosine);
  result.words = kept.size();
  result.pairs = edit.size();
  return result;
}

RatioResult PerturbationRatio(std::span<const std::string> words, const EmbeddingSource& source,
                              const WordTransform& transform, bool split_fragments,
                              std::uint64_t seed, std::size_t random_pairs) {
  if (words.size() < 2) throw std::invalid_argument("PerturbationRatio: need >= 2 words");
  if (random_pairs == 0) throw std::invalid_argument("PerturbationRatio: need >= 1 random pair");
  std::vector<std::optional<Eigen::VectorXd>> base(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) base[i] = source.Lookup(words[i]);

  RatioResult result;
  double numerator = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!base[i]) {
      ++result.skipped;
      continue;
    }
    const std::string changed = transform(words[i], i);
    std::optional<Eigen::VectorXd> v;
    if (split_fragments) {
      v = source.LookupFragments(SplitWhitespace(changed));
    } else if (!changed.empty()) {
      v = source.Lookup(changed);
    }
    if (!v) {
      ++result.skipped;
      continue;
    }
    numerator += CosineDistance(*base[i], *v);
    ++result.words;
  }
  if (result.words == 0) throw std::invalid_argument("PerturbationRatio: nothing embeddable");
  result.numerator = numerator / static_cast<double>(result.words);

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (base[i]) usable.push_back(i);
  }
  if (usable.size() < 2) throw std::invalid_argument("PerturbationRatio: need >= 2 embeddable words");
  std::mt19937_64 rng(MixSeed(seed, kPairStream));
  double denominator = 0.0;
  for (std::size_t k = 0; k < random_pairs; ++k) {
    const std::size_t a = UniformIndex(rng, usable.size());
    std::size_t b = UniformIndex(rng, usable.size() - 1);
    if (b >= a) ++b;
    denominator += CosineDistance(*base[usable[a]], *base[usable[b]]);
  }
  result.pairs = random_pairs;
  result.denominator = denominator / static_cast<double>(random_pairs);
  if (!(result.denominator > 0.0)) throw std::invalid_argument("PerturbationRatio: zero denominator");
  result.ratio = result.numerator / result.denominator;
  return result;
}

RatioResult PerturbationRatio(std::span<const std::string> words, const EmbeddingSource& source,
                              PerturbationKind kind, const PerturbationConfig& config,
                              std::size_t random_pairs) {
  const bool split =
      kind == PerturbationKind::kRandomSpaces || kind == PerturbationKind::kFakePunctuation;
  return PerturbationRatio(
      words, source,
      [&](const std::string& w, std::size_t i) { return PerturbWord(w, kind, config, i); }, split,
      config.rng_seed, random_pairs);
}

CollisionResult CollisionReport(std::span<const std::string> words, CollisionKey key) {
  if (words.empty()) throw std::invalid_argument("CollisionReport: empty word list");
  std::unordered_map<std::u32string, std::size_t> bags;
  bags.reserve(words.size());
  for (const auto& w : words) {
    const std::u32string chars = ToU32(w);
    ++bags[key == CollisionKey::kMultiset ? BagOfChars(chars) : CharSet(chars)];
  }
  CollisionResult result;
  result.total_words = words.size();
  result.bags = bags.size();
  for (const auto& [bag, count] : bags) {
    if (count > 1) result.colliding_words += count;
    result.max_words_per_bag = std::max(result.max_words_per_bag, count);
  }
  result.mean_words_per_bag =
      static_cast<double>(result.total_words) / static_cast<double>(result.bags);
  return result;
}

PipelineResult PipelineExperiment(std::span<const LabeledDoc> corpus,
                                  const PipelineConfig& config) {
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
    throw std::invalid_argument("PipelineExperiment: test_fraction must be in (0, 1)");
  }
  if (config.embedding_runs < 1 || config.classifier_runs < 1) {
    throw std::invalid_argument("PipelineExperiment: run counts must be >= 1");
  }
  if (config.defenses.uc && config.confusables == nullptr) {
    throw std::invalid_argument("PipelineExperiment: UC needs a confusables map");
  }
  if (config.external == nullptr) config.hyper.Validate();

  // Stratified split.
  std::vector<LabeledDoc> train, test;
  for (int label : {0, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus[i].label == label) members.push_back(i);
    }
    std::mt19937_64 rng(MixSeed(config.seed, kSplitStream + static_cast<std::uint64_t>(label)));
    Shuffle(members, rng);
    const auto n_test = static_cast<std::size_t>(
        std::ceil(config.test_fraction * static_cast<double>(members.size())));
    for (std::size_t k = 0; k < members.size(); ++k) {
      (k < n_test ? test : train).push_back(corpus[members[k]]);
    }
  }
  const std::vector<int> train_labels = LabelsOf(train);
  const std::vector<int> test_labels = LabelsOf(test);
  for (const auto* labels : {&train_labels, &test_labels}) {
    if (std::count(labels->begin(), labels->end(), 1) == 0 ||
        std::count(labels->begin(), labels->end(), 0) == 0) {
      throw std::invalid_argument("PipelineExperiment: a split is missing a class");
    }
  }

  const std::vector<std::string> train_texts = TextsOf(train);
  const std::vector<std::string> test_texts = TextsOf(test);
  const std::vector<TokenizedDoc> train_docs = DefendAndTokenize(train_texts, config);
  const std::vector<TokenizedDoc> clean_docs = DefendAndTokenize(test_texts, config);
  std::vector<TokenizedDoc> embed_docs = train_docs;
  {
    const std::vector<TokenizedDoc> extra = DefendAndTokenize(config.embedding_corpus, config);
    embed_docs.insert(embed_docs.end(), extra.begin(), extra.end());
  }

  PipelineResult result;
  result.train_docs = train.size();
  result.test_docs = test.size();
  std::vector<double> clean_aucs, perturbed_aucs;
  for (int e = 0; e < config.embedding_runs; ++e) {
    // Each embedding run draws a fresh attack on the test split.
    std::vector<std::string> attacked(test_texts.size());
    PerturbationConfig attack = config.perturbation;
    for (std::size_t i = 0; i < test_texts.size(); ++i) {
      attack.rng_seed = MixSeed(MixSeed(config.seed, kAttackStream + static_cast<std::uint64_t>(e)),
                                static_cast<std::uint64_t>(i));
      attacked[i] = PerturbDocument(test_texts[i], attack, config.kinds);
    }
    const std::vector<TokenizedDoc> perturbed_docs = DefendAndTokenize(attacked, config);

    std::optional<Cw2vModel> model;
    std::optional<Cw2vEmbeddings> cw2v;
    const EmbeddingSource* source = config.external;
    if (source == nullptr) {
      Hyperparams hyper = config.hyper;
      hyper.seed = MixSeed(config.seed, kEmbedStream + static_cast<std::uint64_t>(e));
      model.emplace(BuildAndTrainCw2v(embed_docs, hyper));
      cw2v.emplace(*model);
      source = &*cw2v;
    }
    const Eigen::MatrixXd x_train = FeaturizeAll(train_docs, *source);
    const Eigen::MatrixXd x_clean = FeaturizeAll(clean_docs, *source);
    const Eigen::MatrixXd x_perturbed = FeaturizeAll(perturbed_docs, *source);

    for (int c = 0; c < config.classifier_runs; ++c) {
      LogRegOptions options = config.classifier;
      options.seed = MixSeed(config.seed, kClassifierStream + static_cast<std::uint64_t>(c));
      const LogRegModel clf = TrainLogReg(x_train, train_labels, options);
      const Eigen::VectorXd clean_scores = clf.ScoreAll(x_clean);
      const Eigen::VectorXd perturbed_scores = clf.ScoreAll(x_perturbed);
      PipelineRun run;
      run.embedding_run = e;
      run.classifier_run = c;
      run.clean_auc = Auc(std::span(clean_scores.data(), clean_scores.size()), test_labels);
      run.perturbed_auc =
          Auc(std::span(perturbed_scores.data(), perturbed_scores.size()), test_labels);
      clean_aucs.push_back(run.clean_auc);
      perturbed_aucs.push_back(run.perturbed_auc);
      result.runs.push_back(run);
    }
  }
  result.clean = Summarize(clean_aucs);
  result.perturbed = Summarize(perturbed_aucs);

  std::string material = "pipeline|" + std::to_string(config.seed) + "|" +
                         FormatDouble(config.test_fraction) + "|" +
                         std::to_string(config.defenses.acd) + std::to_string(config.defenses.uc) +
                         "|" + std::to_string(config.embedding_runs) + "x" +
                         std::to_string(config.classifier_runs) + "|" +
                         (config.external ? config.external->Describe()
                                          : HyperparamsToJson(config.hyper)) +
                         "|" + CorpusDigest(train_docs) + CorpusDigest(clean_docs);
  result.fingerprint = HexDigest(Fnv1a64(material));
  return result;
}

std::vector<SweepPoint> HyperparameterSweep(std::span<const LabeledDoc> corpus,
                                            const PipelineConfig& config,
                                            std::span<const int> hidden_sizes,
                                            std::span<const int> windows,
                                            std::span<const double> rhos) {
  if (hidden_sizes.empty() || windows.empty() || rhos.empty()) {
    throw std::invalid_argument("HyperparameterSweep: empty grid axis");
  }
  std::vector<SweepPoint> points;
  for (int h : hidden_sizes) {
    for (int w : windows) {
      for (double rho : rhos) {
        PipelineConfig point = config;
        point.hyper.hidden = h;
        point.hyper.window = w;
        point.hyper.rho = rho;
        points.push_back({h, w, rho, PipelineExperiment(corpus, point)});
      }
    }
  }
  return points;
}

std::vector<std::string> SampleWords(std::span<const std::string> words, std::size_t count,
                                     std::uint64_t seed) {
  std::vector<std::string> pool(words.begin(), words.end());
  std::mt19937_64 rng(MixSeed(seed, 0x73616d706c65ULL));
  const std::size_t take = std::min(count, pool.size());
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < take; ++i) {
    std::swap(pool[i], pool[i + UniformIndex(rng, pool.size() - i)]);
  }
  pool.resize(take);
  return pool;
}

std::vector<std::string> SampleCorpusWords(std::span<const TokenizedDoc> docs, std::size_t count,
                                           std::size_t min_length, std::uint64_t seed) {
  std::vector<const std::string*> stream;
  for (const auto& doc : docs) {
    for (const auto& t : doc.tokens) {
      if (CodePointLength(t) >= min_length) stream.push_back(&t);
    }
  }
  // Drawing without replacement from the token stream, skipping repeats,
  // picks distinct words with frequency-weighted odds and always terminates.
  std::mt19937_64 rng(MixSeed(seed, 0x636f72707573ULL));
  std::unordered_set<std::string_view> seen;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < stream.size() && out.size() < count; ++i) {
    std::swap(stream[i], stream[i + UniformIndex(rng, stream.size() - i)]);
    if (seen.insert(*stream[i]).second) out.push_back(*stream[i]);
  }
  return out;
}

}  // namespace cw2v
