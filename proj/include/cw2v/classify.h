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

// Document classification on averaged word embeddings.

#ifndef CW2V_CLASSIFY_H_
#define CW2V_CLASSIFY_H_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cw2v/defense.h"
#include "cw2v/model.h"
#include "cw2v/tokenize.h"

namespace cw2v {

// Word -> vector lookup shared by CW2V models and pretrained tables.
class EmbeddingSource {
 public:
  virtual ~EmbeddingSource() = default;
  virtual Eigen::Index dim() const = 0;
  // nullopt when the source has no vector for `word`.
  virtual std::optional<Eigen::VectorXd> Lookup(std::string_view word) const = 0;
  // Mean of the available fragment vectors; nullopt if none is available.
  std::optional<Eigen::VectorXd> LookupFragments(std::span<const std::string> fragments) const;
  // Short description for report metadata.
  virtual std::string Describe() const = 0;
};

// Every non-empty string has a CW2V embedding. Results are memoized, so an
// instance must not be shared across threads.
class Cw2vEmbeddings : public EmbeddingSource {
 public:
  explicit Cw2vEmbeddings(const Cw2vModel& model) : model_(model) {}
  Eigen::Index dim() const override { return model_.h(); }
  std::optional<Eigen::VectorXd> Lookup(std::string_view word) const override;
  std::string Describe() const override { return "cw2v:" + model_.fingerprint; }

 private:
  const Cw2vModel& model_;
  mutable std::unordered_map<std::string, Eigen::VectorXd> cache_;
};

// Text table with one `word v1 ... vh` entry per line. A leading
// `<count> <dim>` header line, as written by fastText and word2vec, is
// skipped.
class TableEmbeddings : public EmbeddingSource {
 public:
  static TableEmbeddings Load(const std::filesystem::path& path);
  static TableEmbeddings Parse(std::istream& in, const std::string& origin);
  TableEmbeddings(std::unordered_map<std::string, Eigen::VectorXd> vectors, Eigen::Index dim);

  Eigen::Index dim() const override { return dim_; }
  std::optional<Eigen::VectorXd> Lookup(std::string_view word) const override;
  std::string Describe() const override;
  std::size_t size() const { return vectors_.size(); }

 private:
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
  Eigen::Index dim_;
  std::string digest_;
};

// Mean of the token vectors the source knows; zero vector when none.
Eigen::VectorXd Featurize(const TokenizedDoc& doc, const EmbeddingSource& source);
// One row per document.
Eigen::MatrixXd FeaturizeAll(std::span<const TokenizedDoc> docs, const EmbeddingSource& source);

struct LogRegOptions {
  double l2 = 1e-4;
  int epochs = 300;
  double learning_rate = 0.5;
  std::uint64_t seed = 0;
};

struct LogRegModel {
  // Raw feature space: score = weights . x + bias.
  Eigen::VectorXd weights;
  double bias = 0.0;
  int epochs = 0;
  double l2 = 0.0;
  std::uint64_t seed = 0;

  double Score(const Eigen::Ref<const Eigen::VectorXd>& x) const { return weights.dot(x) + bias; }
  double Probability(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd ScoreAll(const Eigen::MatrixXd& features) const;
};

// Full-batch gradient descent on the mean logistic loss plus
// 0.5 * l2 * |w|^2 (bias unpenalized). Features are standardized internally
// and the weights mapped back to raw space. Throws std::invalid_argument
// unless labels are 0/1 with both classes present.
LogRegModel TrainLogReg(const Eigen::MatrixXd& features, std::span<const int> labels,
                        const LogRegOptions& options);

std::string SerializeLogReg(const LogRegModel& model);
LogRegModel ParseLogReg(std::string_view text, const std::string& origin = "classifier");

// Mann-Whitney AUC with average ranks for ties. Throws std::invalid_argument
// when either class is missing or the sizes differ.
double Auc(std::span<const double> scores, std::span<const int> labels);

struct LabeledDoc {
  int label = 0;
  std::string text;
};

// `<0|1>\t<text>` per line; blank lines skipped. Throws ParseError.
std::vector<LabeledDoc> ParseLabeledCorpus(std::istream& in, const std::string& origin);
std::vector<LabeledDoc> LoadLabeledCorpus(const std::filesystem::path& path);
std::string FormatLabeledCorpus(std::span<const LabeledDoc> docs);

}  // namespace cw2v

#endif  // CW2V_CLASSIFY_H_
