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

#include "cw2v/classify.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cw2v/defense.h"
#include "cw2v/random.h"
#include "cw2v/report.h"
#include "json.hpp"

namespace cw2v {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

bool ParseNumber(std::string_view field, double& out) {
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::optional<Eigen::VectorXd> EmbeddingSource::LookupFragments(
    std::span<const std::string> fragments) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim());
  std::size_t found = 0;
  for (const auto& f : fragments) {
    if (auto v = Lookup(f)) {
      sum += *v;
      ++found;
    }
  }
  if (found == 0) return std::nullopt;
  return Eigen::VectorXd(sum / static_cast<double>(found));
}

std::optional<Eigen::VectorXd> Cw2vEmbeddings::Lookup(std::string_view word) const {
  if (word.empty()) return std::nullopt;
  const std::string key(word);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, model_.Embed(word)).first;
  return it->second;
}

TableEmbeddings::TableEmbeddings(std::unordered_map<std::string, Eigen::VectorXd> vectors,
                                 Eigen::Index dim)
    : vectors_(std::move(vectors)), dim_(dim) {
  if (dim_ < 1) throw std::invalid_argument("embedding table: dimension must be >= 1");
  std::vector<const std::string*> words;
  for (const auto& [word, v] : vectors_) {
    if (v.size() != dim_) throw std::invalid_argument("embedding table: ragged vector for " + word);
    words.push_back(&word);
  }
  std::sort(words.begin(), words.end(), [](auto* a, auto* b) { return *a < *b; });
  std::uint64_t hash = Fnv1a64("");
  for (const auto* w : words) {
    hash = Fnv1a64(*w, hash);
    const Eigen::VectorXd& v = vectors_.at(*w);
    hash = Fnv1a64(std::string_view(reinterpret_cast<const char*>(v.data()),
                                    sizeof(double) * static_cast<std::size_t>(v.size())),
                   hash);
  }
  digest_ = HexDigest(hash);
}

TableEmbeddings TableEmbeddings::Parse(std::istream& in, const std::string& origin) {
  std::unordered_map<std::string, Eigen::VectorXd> vectors;
  Eigen::Index dim = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(std::move(f));
    if (parts.empty()) continue;
    double probe = 0;
    if (line_no == 1 && parts.size() == 2 && ParseNumber(parts[0], probe) &&
        ParseNumber(parts[1], probe)) {
      continue;  // "<count> <dim>" header
    }
    if (parts.size() < 2) throw ParseError(origin, line_no, "expected a word and a vector");
    const auto d = static_cast<Eigen::Index>(parts.size() - 1);
    if (dim < 0) dim = d;
    if (d != dim) {
      throw ParseError(origin, line_no,
                       "vector has " + std::to_string(d) + " entries, expected " +
                           std::to_string(dim));
    }
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!ParseNumber(parts[static_cast<std::size_t>(i) + 1], v(i)) || !std::isfinite(v(i))) {
        throw ParseError(origin, line_no, "bad number '" + parts[i + 1] + "'");
      }
    }
    if (!vectors.emplace(parts[0], std::move(v)).second) {
      throw ParseError(origin, line_no, "duplicate word '" + parts[0] + "'");
    }
  }
  if (vectors.empty()) throw ParseError(origin, line_no, "no vectors");
  return TableEmbeddings(std::move(vectors), dim);
}

TableEmbeddings TableEmbeddings::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Parse(in, path.string());
}

std::optional<Eigen::VectorXd> TableEmbeddings::Lookup(std::string_view word) const {
  const auto it = vectors_.find(std::string(word));
  if (it == vectors_.end()) return std::nullopt;
  return it->second;
}

std::string TableEmbeddings::Describe() const { return "table:" + digest_; }

Eigen::VectorXd Featurize(const TokenizedDoc& doc, const EmbeddingSource& source) {
  return source.LookupFragments(doc.tokens).value_or(Eigen::VectorXd::Zero(source.dim()));
}

Eigen::MatrixXd FeaturizeAll(std::span<const TokenizedDoc> docs, const EmbeddingSource& source) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(docs.size()), source.dim());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = Featurize(docs[i], source).transpose();
  }
  return x;
}

double LogRegModel::Probability(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return Sigmoid(Score(x));
}

Eigen::VectorXd LogRegModel::ScoreAll(const Eigen::MatrixXd& features) const {
  if (features.cols() != weights.size()) {
    throw std::invalid_argument("classifier expects " + std::to_string(weights.size()) +
                                " features, got " + std::to_string(features.cols()));
  }
  return (features * weights).array() + bias;
}

LogRegModel TrainLogReg(const Eigen::MatrixXd& features, std::span<const int> labels,
                        const LogRegOptions& options) {
  const Eigen::Index m = features.rows();
  const Eigen::Index d = features.cols();
  if (static_cast<std::size_t>(m) != labels.size()) {
    throw std::invalid_argument("TrainLogReg: feature and label counts differ");
  }
  if (options.epochs < 0 || !(options.learning_rate > 0.0) || options.l2 < 0.0) {
    throw std::invalid_argument("TrainLogReg: bad options");
  }
  std::size_t positives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("TrainLogReg: labels must be 0 or 1");
    positives += static_cast<std::size_t>(y);
  }
  if (positives == 0 || positives == labels.size()) {
    throw std::invalid_argument("TrainLogReg: both classes are required");
  }

  const Eigen::RowVectorXd mean = features.colwise().mean();
  Eigen::RowVectorXd scale =
      ((features.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(m))
          .sqrt();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(scale(j) > 1e-12)) scale(j) = 1.0;
  }
  const Eigen::MatrixXd z = (features.rowwise() - mean).array().rowwise() / scale.array();
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) y(i) = labels[static_cast<std::size_t>(i)];

  std::mt19937_64 rng(MixSeed(options.seed, 0x6c6f67726567ULL));
  Eigen::VectorXd w(d);
  for (Eigen::Index j = 0; j < d; ++j) w(j) = UniformReal(rng, -0.01, 0.01);
  double b = 0.0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Eigen::VectorXd residual = ((z * w).array() + b).unaryExpr(&Sigmoid).matrix() - y;
    const Eigen::VectorXd grad_w = z.transpose() * residual / static_cast<double>(m) + options.l2 * w;
    const double grad_b = residual.mean();
    w -= options.learning_rate * grad_w;
    b -= options.learning_rate * grad_b;
  }

  LogRegModel model;
  model.weights = w.array() / scale.transpose().array();
  model.bias = b - mean.dot(model.weights);
  model.epochs = options.epochs;
  model.l2 = options.l2;
  model.seed = options.seed;
  if (!model.weights.allFinite() || !std::isfinite(model.bias)) {
    throw std::runtime_error("TrainLogReg: non-finite parameters");
  }
  return model;
}

std::string SerializeLogReg(const LogRegModel& model) {
  nlohmann::ordered_json j;
  j["weights"] = std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size());
  j["bias"] = model.bias;
  j["epochs"] = model.epochs;
  j["l2"] = model.l2;
  j["seed"] = model.seed;
  return j.dump();
}

LogRegModel ParseLogReg(std::string_view text, const std::string& origin) {
  try {
    const auto j = nlohmann::json::parse(text);
    LogRegModel model;
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.empty()) throw std::invalid_argument("no weights");
    model.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    model.bias = j.at("bias").get<double>();
    model.epochs = j.at("epochs").get<int>();
    model.l2 = j.at("l2").get<double>();
    model.seed = j.at("seed").get<std::uint64_t>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(origin + ": malformed classifier: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
}

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("Auc: size mismatch");
  const std::size_t m = scores.size();
  for (double s : scores) {
    if (!std::isfinite(s)) throw std::invalid_argument("Auc: non-finite score");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j < m && scores[order[j]] == scores[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        positive_rank_sum += rank;
        ++positives;
      } else if (labels[order[k]] != 0) {
        throw std::invalid_argument("Auc: labels must be 0 or 1");
      }
    }
    i = j;
  }
  const std::size_t negatives = m - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("Auc: both classes are required");
  }
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1) / 2) / (p * static_cast<double>(negatives));
}

std::vector<LabeledDoc> ParseLabeledCorpus(std::istream& in, const std::string& origin) {
  std::vector<LabeledDoc> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.size() < 2 || (line[0] != '0' && line[0] != '1') || line[1] != '\t') {
      throw ParseError(origin, line_no, "expected '<0|1><TAB><text>'");
    }
    docs.push_back({line[0] - '0', line.substr(2)});
  }
  return docs;
}

std::vector<LabeledDoc> LoadLabeledCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return ParseLabeledCorpus(in, path.string());
}

std::string FormatLabeledCorpus(std::span<const LabeledDoc> docs) {
  std::string out;
  for (const auto& d : docs) {
    out += static_cast<char>('0' + d.label);
    out += '\t';
    out += d.text;
    out += '\n';
  }
  return out;
}

}  // namespace cw2v
