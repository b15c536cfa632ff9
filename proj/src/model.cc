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

#include "cw2v/model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cw2v/random.h"
#include "cw2v/report.h"
#include "cw2v/strmetrics.h"
#include "cw2v/unicode.h"
#include "json.hpp"

namespace cw2v {
namespace {

using Json = nlohmann::ordered_json;

// Random stream ids, one per consumer.
constexpr std::uint64_t kInitStream = 0x696e6974;
constexpr std::uint64_t kEpochStream = 0x65706f6368;

std::string_view LossName(LossKind loss) {
  return loss == LossKind::kSoftmaxCrossEntropy ? "softmax-ce" : "squared-error";
}

LossKind ParseLoss(std::string_view name) {
  if (name == "softmax-ce") return LossKind::kSoftmaxCrossEntropy;
  if (name == "squared-error") return LossKind::kSquaredError;
  throw std::invalid_argument("unknown loss: " + std::string(name));
}

Json HyperToJson(const Hyperparams& hp) {
  Json j;
  j["rho"] = hp.rho;
  j["hidden"] = hp.hidden;
  j["window"] = hp.window;
  j["learning_rate"] = hp.learning_rate;
  j["batch_size"] = hp.batch_size;
  j["max_epochs"] = hp.max_epochs;
  j["patience"] = hp.patience;
  j["subsample_t"] = hp.subsample_t;
  j["subsample_mode"] = SubsampleModeName(hp.subsample_mode);
  j["pick"] = PickName(hp.pick);
  j["min_count"] = hp.min_count;
  j["max_cluster_words"] = hp.max_cluster_words;
  j["loss"] = LossName(hp.loss);
  j["seed"] = hp.seed;
  return j;
}

Hyperparams HyperFromJson(const Json& j) {
  Hyperparams hp;
  hp.rho = j.at("rho").get<double>();
  hp.hidden = j.at("hidden").get<int>();
  hp.window = j.at("window").get<int>();
  hp.learning_rate = j.at("learning_rate").get<double>();
  hp.batch_size = j.at("batch_size").get<int>();
  hp.max_epochs = j.at("max_epochs").get<int>();
  hp.patience = j.at("patience").get<int>();
  hp.subsample_t = j.at("subsample_t").get<double>();
  const auto mode = ParseSubsampleMode(j.at("subsample_mode").get<std::string>());
  if (!mode) throw std::invalid_argument("unknown subsample_mode");
  hp.subsample_mode = *mode;
  const auto pick = ParsePick(j.at("pick").get<std::string>());
  if (!pick) throw std::invalid_argument("unknown pick");
  hp.pick = *pick;
  hp.min_count = j.at("min_count").get<std::uint64_t>();
  hp.max_cluster_words = j.at("max_cluster_words").get<std::size_t>();
  hp.loss = ParseLoss(j.at("loss").get<std::string>());
  hp.seed = j.at("seed").get<std::uint64_t>();
  hp.Validate();
  return hp;
}

Json MatrixToJson(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd MatrixFromJson(const Json& j, Eigen::Index rows, Eigen::Index cols,
                               const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw std::invalid_argument(what + ": expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument(what + ": row " + std::to_string(r) + " needs " +
                                  std::to_string(cols) + " columns");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

// Sum-normalized spelling vectors of every vocabulary word, one per row.
RowMatrixX<double> VocabSpellingMatrix(const Vocabulary& vocab,
                                       std::span<const std::u32string> index) {
  RowMatrixX<double> s(static_cast<Eigen::Index>(vocab.size()),
                       static_cast<Eigen::Index>(index.size()));
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    Eigen::VectorXd v = SpellingVector(std::u32string_view(vocab[w].chars), index);
    s.row(static_cast<Eigen::Index>(w)) = (v / v.sum()).transpose();
  }
  return s;
}

}  // namespace

void Hyperparams::Validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(rho > 0.0 && rho <= 1.0)) fail("rho must be in (0, 1]");
  if (hidden < 1) fail("hidden must be >= 1");
  if (window < 1) fail("window must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be > 0");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (max_epochs < 1) fail("max_epochs must be >= 1");
  if (patience < 1) fail("patience must be >= 1");
  if (!(subsample_t > 0.0) || !std::isfinite(subsample_t)) fail("subsample_t must be > 0");
  if (min_count < 1) fail("min_count must be >= 1");
  if (max_cluster_words < 1) fail("max_cluster_words must be >= 1");
}

Eigen::VectorXd SpellingVector(std::u32string_view word, std::span<const std::u32string> index) {
  if (word.empty()) throw std::invalid_argument("SpellingVector: empty word");
  Eigen::VectorXd v(static_cast<Eigen::Index>(index.size()));
  for (std::size_t i = 0; i < index.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = StrSim(std::u32string_view(index[i]), word);
  }
  return v;
}

Eigen::VectorXd SpellingVector(std::string_view word, std::span<const std::string> index) {
  std::vector<std::u32string> chars;
  chars.reserve(index.size());
  for (const auto& w : index) chars.push_back(ToU32(w));
  return SpellingVector(std::u32string_view(ToU32(word)), chars);
}

bool EarlyStopping::Update(double loss) {
  if (loss < best_) {
    best_ = loss;
    stale_ = 0;
  } else {
    ++stale_;
  }
  return stale_ >= patience_;
}

std::vector<std::pair<std::size_t, std::size_t>> ContextPairs(std::size_t length, int window) {
  if (window < 1) throw std::invalid_argument("ContextPairs: window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t c = 0; c < length; ++c) {
    const std::size_t lo = c >= w ? c - w : 0;
    const std::size_t hi = std::min(length - 1, c + w);
    for (std::size_t x = lo; x <= hi; ++x) {
      if (x != c) pairs.emplace_back(c, x);
    }
  }
  return pairs;
}

Cw2vModel::Cw2vModel(std::vector<std::string> index, Eigen::MatrixXd w_in, Eigen::MatrixXd w_out,
                     Hyperparams hyper)
    : index_(std::move(index)), w_in_(std::move(w_in)), w_out_(std::move(w_out)),
      hyper_(hyper) {
  const auto n = static_cast<Eigen::Index>(index_.size());
  if (n == 0) throw std::invalid_argument("model: empty spelling index");
  if (w_in_.rows() != n || w_out_.cols() != n) {
    throw std::invalid_argument("model: matrix shapes disagree with index length " +
                                std::to_string(n));
  }
  if (w_in_.cols() != w_out_.rows() || w_in_.cols() < 1) {
    throw std::invalid_argument("model: hidden sizes of w_in and w_out disagree");
  }
  if (!w_in_.allFinite() || !w_out_.allFinite()) {
    throw std::invalid_argument("model: non-finite weights");
  }
  index_chars_.reserve(index_.size());
  for (const auto& w : index_) {
    if (w.empty()) throw std::invalid_argument("model: empty index word");
    index_chars_.push_back(ToU32(w));
  }
}

Eigen::VectorXd Cw2vModel::SpellingVectorOf(std::string_view word) const {
  Eigen::VectorXd v = SpellingVector(std::u32string_view(ToU32(word)), index_chars_);
  return v / v.sum();
}

Eigen::VectorXd Cw2vModel::Embed(std::string_view word) const {
  return w_in_.transpose() * SpellingVector(std::u32string_view(ToU32(word)), index_chars_);
}

Eigen::VectorXd Cw2vModel::EmbedFragments(std::span<const std::string> fragments) const {
  if (fragments.empty()) throw std::invalid_argument("EmbedFragments: no fragments");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(h());
  for (const auto& f : fragments) sum += Embed(f);
  return sum / static_cast<double>(fragments.size());
}

Cw2vModel TrainCw2v(std::span<const TokenizedDoc> corpus, const Vocabulary& vocab,
                    const SpellingIndex& index, const Hyperparams& hyper) {
  hyper.Validate();
  if (index.words.empty()) throw std::invalid_argument("TrainCw2v: empty spelling index");
  std::vector<std::u32string> index_chars;
  for (const auto& w : index.words) index_chars.push_back(ToU32(w));
  const auto n = static_cast<Eigen::Index>(index.words.size());
  const Eigen::Index h = hyper.hidden;

  const RowMatrixX<double> spelling = VocabSpellingMatrix(vocab, index_chars);
  std::vector<double> keep(vocab.size());
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    keep[w] = KeepProbability(vocab[w].frequency, hyper.subsample_t, hyper.subsample_mode);
  }
  std::vector<std::vector<std::size_t>> docs;
  docs.reserve(corpus.size());
  for (const auto& doc : corpus) {
    std::vector<std::size_t> ids;
    for (const auto& token : doc.tokens) {
      if (const auto id = vocab.Find(token)) ids.push_back(*id);
    }
    docs.push_back(std::move(ids));
  }

  std::mt19937_64 init_rng(MixSeed(hyper.seed, kInitStream));
  const double bound = 0.5 / static_cast<double>(h);
  Eigen::MatrixXd w_in(n, h);
  Eigen::MatrixXd w_out(h, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < h; ++c) w_in(r, c) = UniformReal(init_rng, -bound, bound);
  }
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) w_out(r, c) = UniformReal(init_rng, -bound, bound);
  }

  TrainingReport report;
  EarlyStopping stopper(hyper.patience);
  Eigen::MatrixXd inputs, targets, grad_in, grad_out;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> kept;
  for (int epoch = 0; epoch < hyper.max_epochs; ++epoch) {
    std::mt19937_64 rng(MixSeed(hyper.seed, kEpochStream + static_cast<std::uint64_t>(epoch)));
    pairs.clear();
    for (const auto& ids : docs) {
      kept.clear();
      for (std::size_t id : ids) {
        if (Bernoulli(rng, keep[id])) kept.push_back(id);
      }
      for (const auto& [c, x] : ContextPairs(kept.size(), hyper.window)) {
        pairs.emplace_back(kept[c], kept[x]);
      }
    }
    if (pairs.empty()) {
      throw std::runtime_error("TrainCw2v: no training pairs in epoch " +
                               std::to_string(epoch + 1) + "; corpus too small or t too low");
    }
    Shuffle(pairs, rng);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < pairs.size();
         start += static_cast<std::size_t>(hyper.batch_size)) {
      const std::size_t end =
          std::min(pairs.size(), start + static_cast<std::size_t>(hyper.batch_size));
      const auto rows = static_cast<Eigen::Index>(end - start);
      inputs.resize(rows, n);
      targets.resize(rows, n);
      for (std::size_t k = start; k < end; ++k) {
        const auto r = static_cast<Eigen::Index>(k - start);
        inputs.row(r) = spelling.row(static_cast<Eigen::Index>(pairs[k].first));
        targets.row(r) = spelling.row(static_cast<Eigen::Index>(pairs[k].second));
      }
      const double loss =
          LossAndGradients<double>(inputs, targets, w_in, w_out, hyper.loss, &grad_in, &grad_out);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("TrainCw2v: loss diverged in epoch " + std::to_string(epoch + 1) +
                                 "; lower the learning rate");
      }
      loss_sum += loss * static_cast<double>(rows);
      w_in.noalias() -= hyper.learning_rate * grad_in;
      w_out.noalias() -= hyper.learning_rate * grad_out;
    }
    const double epoch_loss = loss_sum / static_cast<double>(pairs.size());
    report.epoch_losses.push_back(epoch_loss);
    report.pairs_last_epoch = pairs.size();
    if (stopper.Update(epoch_loss)) {
      report.early_stopped = epoch + 1 < hyper.max_epochs;
      break;
    }
  }

  Cw2vModel model(index.words, std::move(w_in), std::move(w_out), hyper);
  model.training = std::move(report);
  std::string material = CorpusDigest(corpus) + HyperparamsToJson(hyper);
  for (const auto& w : index.words) material += w + '\n';
  model.fingerprint = HexDigest(Fnv1a64(material));
  return model;
}

Cw2vModel BuildAndTrainCw2v(std::span<const TokenizedDoc> corpus, const Hyperparams& hyper) {
  hyper.Validate();
  const Vocabulary vocab = Vocabulary::Build(corpus, hyper.min_count);
  ClusterOptions options;
  options.n = std::min(IndexSizeFor(vocab.size(), hyper.rho),
                       std::min(vocab.size(), hyper.max_cluster_words));
  options.seed = hyper.seed;
  options.pick = hyper.pick;
  options.max_cluster_words = hyper.max_cluster_words;
  const SpellingIndex index = ClusterIndex(vocab, options);
  return TrainCw2v(corpus, vocab, index, hyper);
}

std::string HyperparamsToJson(const Hyperparams& hyper) { return HyperToJson(hyper).dump(); }

Hyperparams HyperparamsFromJson(std::string_view json) {
  return HyperFromJson(Json::parse(json));
}

std::string CorpusDigest(std::span<const TokenizedDoc> corpus) {
  std::uint64_t hash = Fnv1a64("");
  for (const auto& doc : corpus) {
    for (const auto& token : doc.tokens) {
      hash = Fnv1a64(token, hash);
      hash = Fnv1a64(" ", hash);
    }
    hash = Fnv1a64("\n", hash);
  }
  return HexDigest(hash);
}

std::string SerializeModel(const Cw2vModel& model) {
  Json doc;
  doc["format"] = "cw2v-model";
  doc["version"] = kModelFormatVersion;
  doc["n"] = model.n();
  doc["h"] = model.h();
  doc["hyper"] = HyperToJson(model.hyper());
  doc["meta"] = {{"seed", model.hyper().seed}, {"fingerprint", model.fingerprint}};
  doc["training"] = {{"epoch_losses", model.training.epoch_losses},
                     {"pairs_last_epoch", model.training.pairs_last_epoch},
                     {"early_stopped", model.training.early_stopped}};
  doc["index"] = model.index();
  doc["w_in"] = MatrixToJson(model.w_in());
  doc["w_out"] = MatrixToJson(model.w_out());
  return doc.dump() + "\n";
}

Cw2vModel ParseModel(std::string_view text, const std::string& origin) {
  try {
    const Json doc = Json::parse(text);
    if (doc.at("format").get<std::string>() != "cw2v-model") {
      throw std::invalid_argument("not a cw2v model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw std::invalid_argument("unsupported model version " + std::to_string(version));
    }
    const auto n = doc.at("n").get<Eigen::Index>();
    const auto h = doc.at("h").get<Eigen::Index>();
    auto index = doc.at("index").get<std::vector<std::string>>();
    if (static_cast<Eigen::Index>(index.size()) != n) {
      throw std::invalid_argument("index has " + std::to_string(index.size()) +
                                  " words but n=" + std::to_string(n));
    }
    Hyperparams hyper = HyperFromJson(doc.at("hyper"));
    if (hyper.hidden != h) throw std::invalid_argument("hyper.hidden disagrees with h");
    Cw2vModel model(std::move(index), MatrixFromJson(doc.at("w_in"), n, h, "w_in"),
                    MatrixFromJson(doc.at("w_out"), h, n, "w_out"), hyper);
    model.fingerprint = doc.at("meta").at("fingerprint").get<std::string>();
    const Json& training = doc.at("training");
    model.training.epoch_losses = training.at("epoch_losses").get<std::vector<double>>();
    model.training.pairs_last_epoch = training.at("pairs_last_epoch").get<std::size_t>();
    model.training.early_stopped = training.at("early_stopped").get<bool>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(origin + ": malformed model: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
}

void SaveModel(const Cw2vModel& model, const std::filesystem::path& path) {
  WriteFile(path, SerializeModel(model));
}

Cw2vModel LoadModel(const std::filesystem::path& path) {
  return ParseModel(ReadFile(path), path.string());
}

}  // namespace cw2v
