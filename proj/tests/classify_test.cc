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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cw2v/random.h"

namespace cw2v {
namespace {

TableEmbeddings SmallTable() {
  std::unordered_map<std::string, Eigen::VectorXd> vectors;
  vectors["like"] = Eigen::Vector2d(1.0, 0.0);
  vectors["share"] = Eigen::Vector2d(0.0, 2.0);
  return TableEmbeddings(std::move(vectors), 2);
}

std::vector<double> RandomScores(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> s(n);
  for (double& x : s) x = UniformReal(rng, -3.0, 3.0);
  return s;
}

std::vector<int> BalancedLabels(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % 2);
  Shuffle(y, rng);
  return y;
}

TEST(Auc, Examples) {
  EXPECT_DOUBLE_EQ(Auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}),
                   0.75);
  EXPECT_DOUBLE_EQ(Auc(std::vector<double>{1, 2, 3, 4}, std::vector<int>{0, 0, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(Auc(std::vector<double>{4, 3, 2, 1}, std::vector<int>{0, 0, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(Auc(std::vector<double>{1, 1, 1, 1}, std::vector<int>{0, 1, 0, 1}), 0.5);
}

TEST(Auc, MatchesPairCountingOracle) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(30);
    for (double& x : s) x = static_cast<double>(UniformIndex(rng, 6));  // many ties
    const auto y = BalancedLabels(rng, s.size());
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (y[i] == 1 && y[j] == 0) {
          pairs += 1;
          wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
        }
      }
    }
    ASSERT_NEAR(Auc(s, y), wins / pairs, 1e-12);
  }
}

TEST(Auc, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = RandomScores(rng, 40);
    const auto y = BalancedLabels(rng, s.size());
    std::vector<double> e(s.size()), c(s.size()), neg(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      e[i] = std::exp(s[i]);
      c[i] = 5.0 * s[i] * s[i] * s[i] - 2.0;
      neg[i] = -s[i];
    }
    const double base = Auc(s, y);
    ASSERT_DOUBLE_EQ(Auc(e, y), base);
    ASSERT_DOUBLE_EQ(Auc(c, y), base);
    ASSERT_NEAR(Auc(neg, y) + base, 1.0, 1e-12);
  }
}

TEST(Auc, Errors) {
  EXPECT_THROW(Auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}), std::invalid_argument);
  EXPECT_THROW(Auc(std::vector<double>{1}, std::vector<int>{0, 1}), std::invalid_argument);
  EXPECT_THROW(Auc(std::vector<double>{NAN, 1}, std::vector<int>{0, 1}), std::invalid_argument);
}

TEST(Featurize, Cases) {
  const TableEmbeddings table = SmallTable();
  EXPECT_TRUE(Featurize({{"like"}, {}}, table).isApprox(Eigen::Vector2d(1, 0)));
  EXPECT_TRUE(Featurize({{"like", "like"}, {}}, table).isApprox(Eigen::Vector2d(1, 0)));
  EXPECT_TRUE(Featurize({{"like", "share"}, {}}, table).isApprox(Eigen::Vector2d(0.5, 1)));
  EXPECT_TRUE(Featurize({{"share", "like"}, {}}, table).isApprox(Eigen::Vector2d(0.5, 1)));
  EXPECT_TRUE(Featurize({{"like", "unknown"}, {}}, table).isApprox(Eigen::Vector2d(1, 0)));
  EXPECT_EQ(Featurize({{}, {}}, table), Eigen::Vector2d::Zero());
  EXPECT_EQ(Featurize({{"unknown"}, {}}, table), Eigen::Vector2d::Zero());

  const std::vector<TokenizedDoc> docs = {{{"like"}, {}}, {{"share"}, {}}};
  const Eigen::MatrixXd m = FeaturizeAll(docs, table);
  EXPECT_EQ(m.rows(), 2);
  EXPECT_TRUE(m.row(1).isApprox(Eigen::RowVector2d(0, 2)));
}

TEST(TableEmbeddings, ParsesWithAndWithoutHeader) {
  std::istringstream with_header("2 3\nlike 1 2 3\nshare 4 5 6\n");
  const auto a = TableEmbeddings::Parse(with_header, "a");
  EXPECT_EQ(a.dim(), 3);
  EXPECT_EQ(a.size(), 2u);
  EXPECT_TRUE(a.Lookup("share")->isApprox(Eigen::Vector3d(4, 5, 6)));
  EXPECT_FALSE(a.Lookup("nope").has_value());

  std::istringstream without("like 1 2 3\nshare 4 5 6\n");
  const auto b = TableEmbeddings::Parse(without, "b");
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(a.Describe(), b.Describe());
}

TEST(TableEmbeddings, RejectsMalformedTables) {
  std::istringstream ragged("a 1 2\nb 1\n");
  EXPECT_THROW(TableEmbeddings::Parse(ragged, "r"), ParseError);
  std::istringstream bad_number("a 1 x\n");
  EXPECT_THROW(TableEmbeddings::Parse(bad_number, "n"), ParseError);
  std::istringstream duplicate("a 1\na 2\n");
  EXPECT_THROW(TableEmbeddings::Parse(duplicate, "d"), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(TableEmbeddings::Parse(empty, "e"), ParseError);
}

TEST(LookupFragments, AveragesKnownFragments) {
  const TableEmbeddings table = SmallTable();
  const std::vector<std::string> frags = {"like", "share", "zzz"};
  EXPECT_TRUE(table.LookupFragments(frags)->isApprox(Eigen::Vector2d(0.5, 1)));
  const std::vector<std::string> unknown = {"zzz"};
  EXPECT_FALSE(table.LookupFragments(unknown).has_value());
}

TEST(LogReg, SeparatesBlobs) {
  std::mt19937_64 rng(73);
  const int m = 400;
  Eigen::MatrixXd x(m, 2);
  std::vector<int> y(m);
  for (int i = 0; i < m; ++i) {
    y[i] = i % 2;
    const double center = y[i] ? 3.0 : -3.0;
    x(i, 0) = center + UniformReal(rng, -1, 1);
    x(i, 1) = 100.0 + 50.0 * UniformReal(rng, -1, 1);
  }
  const LogRegModel model = TrainLogReg(x, y, {});
  const Eigen::VectorXd scores = model.ScoreAll(x);
  int correct = 0;
  for (int i = 0; i < m; ++i) correct += (scores[i] > 0) == (y[i] == 1);
  EXPECT_GE(correct / static_cast<double>(m), 0.99);
  EXPECT_GT(model.Probability(Eigen::Vector2d(3, 100)), 0.9);
}

TEST(LogReg, ConstantFeaturesGiveClassPrior) {
  const int m = 100;
  const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(m, 3, 0.7);
  std::vector<int> y(m, 0);
  for (int i = 0; i < 30; ++i) y[i] = 1;
  const LogRegModel model = TrainLogReg(x, y, {.epochs = 2000});
  EXPECT_NEAR(model.Probability(x.row(0).transpose()), 0.3, 1e-3);
}

TEST(LogReg, ZeroEpochsIsChance) {
  std::mt19937_64 rng(74);
  const int m = 2000;
  Eigen::MatrixXd x(m, 5);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = UniformReal(rng, -1, 1);
  const auto y = BalancedLabels(rng, m);
  const LogRegModel model = TrainLogReg(x, y, {.epochs = 0, .seed = 2});
  const Eigen::VectorXd s = model.ScoreAll(x);
  EXPECT_NEAR(Auc(std::vector<double>(s.data(), s.data() + s.size()), y), 0.5, 0.05);
}

TEST(LogReg, DeterministicAndSerializable) {
  std::mt19937_64 rng(75);
  Eigen::MatrixXd x(50, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = UniformReal(rng, -1, 1);
  const auto y = BalancedLabels(rng, 50);
  const LogRegModel a = TrainLogReg(x, y, {.seed = 9});
  const LogRegModel b = TrainLogReg(x, y, {.seed = 9});
  EXPECT_EQ(SerializeLogReg(a), SerializeLogReg(b));
  const LogRegModel parsed = ParseLogReg(SerializeLogReg(a));
  EXPECT_EQ(SerializeLogReg(parsed), SerializeLogReg(a));
  EXPECT_THROW(ParseLogReg("{}"), std::invalid_argument);
}

TEST(LogReg, RequiresBothClasses) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(4, 2);
  EXPECT_THROW(TrainLogReg(x, std::vector<int>{1, 1, 1, 1}, {}), std::invalid_argument);
  EXPECT_THROW(TrainLogReg(x, std::vector<int>{0, 2, 0, 1}, {}), std::invalid_argument);
  EXPECT_THROW(TrainLogReg(x, std::vector<int>{0, 1}, {}), std::invalid_argument);
}

TEST(LabeledCorpus, ParseAndFormat) {
  std::istringstream in("1\tlike and share\n\n0\tnice day\r\n");
  const auto docs = ParseLabeledCorpus(in, "c");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].label, 1);
  EXPECT_EQ(docs[1].text, "nice day");
  EXPECT_EQ(FormatLabeledCorpus(docs), "1\tlike and share\n0\tnice day\n");

  std::istringstream bad("1\tok\n2\tbad label\n");
  try {
    ParseLabeledCorpus(bad, "c");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

}  // namespace
}  // namespace cw2v
