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

// Continuous word embeddings from spelling vectors.
//
// A word enters the network as its spelling vector: StrSim against every
// word of the spelling index. A skip-gram style network with one hidden
// layer maps the (sum-normalized) spelling vector of a center word to a
// softmax over index positions, trained against the sum-normalized spelling
// vector of each context word:
//
//   hidden = x^T W_in          (n x h)
//   logits = hidden W_out      (h x n)
//   loss   = -sum_j t_j log softmax(logits)_j
//
// The embedding of any string, seen in training or not, is s^T W_in with s
// its raw (unnormalized) spelling vector. Normalization only matters during
// training; cosine distances are unaffected by it.

#ifndef CW2V_MODEL_H_
#define CW2V_MODEL_H_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cw2v/tokenize.h"
#include "cw2v/vocab.h"

namespace cw2v {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowMatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class LossKind {
  kSoftmaxCrossEntropy,
  // Linear output, 0.5 * squared error. Kept for ablations.
  kSquaredError,
};

struct Hyperparams {
  double rho = 0.005;
  int hidden = 200;
  int window = 2;
  double learning_rate = 20.0;
  int batch_size = 64;
  int max_epochs = 20;
  int patience = 2;
  double subsample_t = 1e-3;
  SubsampleMode subsample_mode = SubsampleMode::kStandard;
  RepresentativePick pick = RepresentativePick::kRandom;
  std::uint64_t min_count = 1;
  std::size_t max_cluster_words = 20000;
  LossKind loss = LossKind::kSoftmaxCrossEntropy;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument.
  void Validate() const;
};

// StrSim(index[i], word) for every index word. Throws on an empty word.
Eigen::VectorXd SpellingVector(std::u32string_view word, std::span<const std::u32string> index);
Eigen::VectorXd SpellingVector(std::string_view word, std::span<const std::string> index);

// Mean batch loss and, when requested, its gradients with respect to both
// matrices. `inputs` and `targets` hold one example per row.
template <typename Scalar>
Scalar LossAndGradients(const MatrixX<Scalar>& inputs, const MatrixX<Scalar>& targets,
                        const MatrixX<Scalar>& w_in, const MatrixX<Scalar>& w_out, LossKind loss,
                        MatrixX<Scalar>* grad_in, MatrixX<Scalar>* grad_out) {
  const auto batch = static_cast<Scalar>(inputs.rows());
  const MatrixX<Scalar> hidden = inputs * w_in;
  const MatrixX<Scalar> logits = hidden * w_out;
  MatrixX<Scalar> delta(logits.rows(), logits.cols());
  Scalar total = 0;

  if (loss == LossKind::kSoftmaxCrossEntropy) {
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
      const Scalar peak = logits.row(r).maxCoeff();
      const auto shifted = (logits.row(r).array() - peak).eval();
      const Scalar log_norm = std::log(shifted.exp().sum());
      const auto log_probs = (shifted - log_norm).eval();
      const Scalar mass = targets.row(r).sum();
      total -= (targets.row(r).array() * log_probs).sum();
      delta.row(r) = (log_probs.exp() * mass - targets.row(r).array()).matrix();
    }
  } else {
    delta = logits - targets;
    total = Scalar(0.5) * delta.squaredNorm();
  }

  if (grad_in != nullptr || grad_out != nullptr) {
    delta /= batch;
    if (grad_out != nullptr) *grad_out = hidden.transpose() * delta;
    if (grad_in != nullptr) *grad_in = inputs.transpose() * (delta * w_out.transpose());
  }
  return total / batch;
}

// Stops once the loss has failed to improve on its best value for
// `patience` consecutive epochs.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}
  // Returns true when training should stop after this epoch.
  bool Update(double loss);
  int stale_epochs() const { return stale_; }

 private:
  int patience_;
  int stale_ = 0;
  double best_ = std::numeric_limits<double>::infinity();
};

// (center, context) position pairs with 1 <= |center - context| <= window,
// in center-major order.
std::vector<std::pair<std::size_t, std::size_t>> ContextPairs(std::size_t length, int window);

struct TrainingReport {
  std::vector<double> epoch_losses;
  std::size_t pairs_last_epoch = 0;
  bool early_stopped = false;
};

class Cw2vModel {
 public:
  // Throws std::invalid_argument on inconsistent shapes or non-finite
  // entries.
  Cw2vModel(std::vector<std::string> index, Eigen::MatrixXd w_in, Eigen::MatrixXd w_out,
            Hyperparams hyper);

  const std::vector<std::string>& index() const { return index_; }
  const Eigen::MatrixXd& w_in() const { return w_in_; }
  const Eigen::MatrixXd& w_out() const { return w_out_; }
  const Hyperparams& hyper() const { return hyper_; }
  Eigen::Index n() const { return w_in_.rows(); }
  Eigen::Index h() const { return w_in_.cols(); }

  // Sum-normalized spelling vector against this model's index, as used for
  // training inputs and targets.
  Eigen::VectorXd SpellingVectorOf(std::string_view word) const;
  // Raw spelling vector times W_in. Throws std::invalid_argument on an empty
  // word.
  Eigen::VectorXd Embed(std::string_view word) const;
  // Element-wise mean of Embed() over the fragments. Throws on an empty list.
  Eigen::VectorXd EmbedFragments(std::span<const std::string> fragments) const;

  // Provenance carried into the model file.
  std::string fingerprint;
  TrainingReport training;

 private:
  std::vector<std::string> index_;
  std::vector<std::u32string> index_chars_;
  Eigen::MatrixXd w_in_;
  Eigen::MatrixXd w_out_;
  Hyperparams hyper_;
};

// Trains on `corpus` (already defended and tokenized). Tokens outside
// `vocab` are dropped before windowing. Throws std::runtime_error when no
// training pair survives subsampling or the loss becomes non-finite.
Cw2vModel TrainCw2v(std::span<const TokenizedDoc> corpus, const Vocabulary& vocab,
                    const SpellingIndex& index, const Hyperparams& hyper);

// Vocabulary -> spelling index (n = round(rho |V|)) -> training.
Cw2vModel BuildAndTrainCw2v(std::span<const TokenizedDoc> corpus, const Hyperparams& hyper);

// Model file: JSON with `version`, `n`, `h`, `hyper`, `index`, `w_in` (n rows
// of h numbers), `w_out` (h rows of n numbers), plus provenance fields.
std::string SerializeModel(const Cw2vModel& model);
Cw2vModel ParseModel(std::string_view text, const std::string& origin = "model");
void SaveModel(const Cw2vModel& model, const std::filesystem::path& path);
Cw2vModel LoadModel(const std::filesystem::path& path);

inline constexpr int kModelFormatVersion = 1;

// Canonical JSON of the hyperparameters (fixed key order).
std::string HyperparamsToJson(const Hyperparams& hyper);
Hyperparams HyperparamsFromJson(std::string_view json);

// Digest of a tokenized corpus, for fingerprints.
std::string CorpusDigest(std::span<const TokenizedDoc> corpus);

}  // namespace cw2v

#endif  // CW2V_MODEL_H_
