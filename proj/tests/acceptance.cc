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


// Acceptance checks. `cw2v_acceptance N` runs criterion N (1-9) and prints
// one line:  criterion N <name>: PASS|FAIL <details> (<seconds> s)
// With no argument every criterion runs in turn. Exit status is 0 only if
// all requested criteria pass.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cw2v/classify.h"
#include "cw2v/defense.h"
#include "cw2v/eval.h"
#include "cw2v/model.h"
#include "cw2v/perturb.h"
#include "cw2v/random.h"
#include "cw2v/report.h"
#include "cw2v/strmetrics.h"
#include "cw2v/synthetic.h"
#include "cw2v/unicode.h"
#include "gradcheck.h"
#include "support.h"

namespace cw2v {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

// Sets `ok` to false and records the failed check.
struct Checks {
  bool ok = true;
  std::vector<std::string> failed;
  void Expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      failed.push_back(what);
    }
  }
  std::string Failures() const {
    std::string out;
    for (const auto& f : failed) out += (out.empty() ? "" : "; ") + f;
    return out;
  }
};

Outcome StrSimOracle() {
  Checks c;
  c.Expect(StrSim("like", "bike") == 4.0, "str_sim(like, bike) != 4");
  std::mt19937_64 rng(1);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string w = testing::RandomUnicodeWord(rng, 1, 12);
    if (StrSim(w, w) != 2.0 * static_cast<double>(CodePointLength(w))) ++mismatches;
    const std::string a = testing::RandomUnicodeWord(rng, 1, 12);
    const std::string b = testing::RandomUnicodeWord(rng, 1, 12);
    const std::u32string ua = ToU32(a), ub = ToU32(b);
    const double min_len = static_cast<double>(std::min(ua.size(), ub.size()));
    const double expected =
        ua == ub ? 2.0 * min_len
                 : min_len / static_cast<double>(testing::OracleLevenshtein(ua, ub));
    if (StrSim(a, b) != expected) ++mismatches;
  }
  c.Expect(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");
  return {c.ok, c.ok ? "1000 random pairs and 1000 self pairs match the DP oracle" : c.Failures()};
}

Outcome DefenseRoundTrips() {
  const ConfusablesMap& map = testing::ShippedConfusables();
  PerturbationConfig config = DefaultPerturbationConfig(map);
  config.per_char_probability = 0.5;
  std::string lookalike_letters, tandem_letters;
  for (const auto& [ch, sources] : config.lookalike_map) {
    if (ch < 0x80) lookalike_letters.push_back(static_cast<char>(ch));
  }
  for (const auto& [ch, seq] : config.tandem_map) tandem_letters += ToUtf8(ch);

  std::mt19937_64 rng(2);
  int acd_fail = 0, uc_fail = 0, idem_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    config.rng_seed = static_cast<std::uint64_t>(i);
    const std::string w = testing::RandomWord(rng, 3, 12, testing::kAlnum);
    for (PerturbationKind kind : {PerturbationKind::kSpaceSeparation,
                                  PerturbationKind::kZeroWidthSeparation,
                                  PerturbationKind::kCombinedUnicode}) {
      if (Acd(PerturbWord(w, kind, config)) != w) ++acd_fail;
    }
    const std::string a = testing::RandomWord(rng, 3, 12, lookalike_letters);
    const std::string b = testing::RandomWord(rng, 3, 12, tandem_letters);
    if (UnicodeCanonicalize(PerturbWord(a, PerturbationKind::kReplaceUnicode, config), map) != a) {
      ++uc_fail;
    }
    if (UnicodeCanonicalize(PerturbWord(b, PerturbationKind::kTandemCharacter, config), map) != b) {
      ++uc_fail;
    }
    const std::string doc =
        PerturbDocument(testing::RandomDocument(rng, 12), config, KindPolicy::UniformRandom());
    const std::string acd = Acd(doc);
    const std::string uc = UnicodeCanonicalize(doc, map);
    if (Acd(acd) != acd || UnicodeCanonicalize(uc, map) != uc) ++idem_fail;
  }
  Checks c;
  c.Expect(acd_fail == 0, std::to_string(acd_fail) + " ACD round-trip failures");
  c.Expect(uc_fail == 0, std::to_string(uc_fail) + " UC round-trip failures");
  c.Expect(idem_fail == 0, std::to_string(idem_fail) + " idempotence failures");
  return {c.ok, c.ok ? "3000 ACD and 2000 UC round trips, 1000 documents idempotent" : c.Failures()};
}

Outcome Collisions() {
  fs::path path = testing::DataDir() / "words.txt";
  if (const char* env = std::getenv("CW2V_ENGLISH_WORDS")) path = env;
  if (!fs::is_regular_file(path)) {
    return {false, "English word list not available (" + path.string() +
                       "); set CW2V_ENGLISH_WORDS to the 466,551-word list"};
  }
  const std::vector<std::string> words = ReadLines(path);
  const CollisionResult set = CollisionReport(words, CollisionKey::kSet);
  const CollisionResult multi = CollisionReport(words, CollisionKey::kMultiset);
  Checks c;
  c.Expect(std::abs(static_cast<double>(set.colliding_words) - 312790.0) <= 0.02 * 312790.0,
           "colliding " + std::to_string(set.colliding_words) + " not within 2% of 312790");
  c.Expect(std::abs(set.mean_words_per_bag - 2.03) <= 0.05,
           "mean " + Fmt(set.mean_words_per_bag) + " not within 0.05 of 2.03");
  c.Expect(std::abs(static_cast<double>(set.max_words_per_bag) - 116.0) <= 10.0,
           "max " + std::to_string(set.max_words_per_bag) + " not within 10 of 116");
  std::string detail = std::to_string(words.size()) + " words; distinct-character key: colliding " +
                       std::to_string(set.colliding_words) + ", mean " +
                       Fmt(set.mean_words_per_bag) + ", max " +
                       std::to_string(set.max_words_per_bag) + "; multiset key: colliding " +
                       std::to_string(multi.colliding_words) + ", mean " +
                       Fmt(multi.mean_words_per_bag) + ", max " +
                       std::to_string(multi.max_words_per_bag);
  if (!c.ok) detail += "; " + c.Failures();
  return {c.ok, detail};
}

Outcome Gradients() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto n = static_cast<Eigen::Index>(2 + i % 9);
    const auto h = static_cast<Eigen::Index>(1 + (i * 3) % 5);
    const auto r = testing::CheckGradients(100 + i, n, h, 4, LossKind::kSoftmaxCrossEntropy);
    worst = std::max(worst, r.max_relative_error);
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", worst);
  return {worst <= 1e-4, std::string("worst relative error ") + buf + " over 20 instances (limit 1e-4)"};
}

// Model for criteria 5 and 6: Lee corpus, h = 50, rho = 0.1, seed 0.
struct LeeSetup {
  std::vector<TokenizedDoc> docs;
  Cw2vModel model;
};

LeeSetup TrainLee() {
  const auto lines = ReadLines(testing::DataDir() / "corpus" / "lee_background.txt");
  std::vector<TokenizedDoc> docs;
  for (const auto& line : lines) docs.push_back(Tokenize(line));
  Hyperparams hyper;
  hyper.hidden = 50;
  hyper.rho = 0.1;
  hyper.seed = 0;
  Cw2vModel model = BuildAndTrainCw2v(docs, hyper);
  return {std::move(docs), std::move(model)};
}

Outcome Correlation() {
  const LeeSetup lee = TrainLee();
  const Cw2vEmbeddings source(lee.model);
  const auto words = SampleCorpusWords(lee.docs, 100, 3, 0);
  const CorrelationResult r = CorrelationReport(words, source);
  const bool pass = lee.model.n() >= 50 && r.pearson > 0.5;
  return {pass, std::to_string(lee.docs.size()) + " sentences, n=" +
                    std::to_string(lee.model.n()) + ", h=50, " + std::to_string(r.words) +
                    " words: pearson " + Fmt(r.pearson) + " (threshold 0.5), spearman " +
                    Fmt(r.spearman)};
}

Outcome Ratios() {
  const LeeSetup lee = TrainLee();
  const Cw2vEmbeddings source(lee.model);
  const auto words = SampleCorpusWords(lee.docs, 500, 3, 0);
  const PerturbationConfig config = DefaultPerturbationConfig(testing::ShippedConfusables(), 0);
  Checks c;
  std::string detail;
  for (PerturbationKind kind : {PerturbationKind::kNeighboringKey, PerturbationKind::kTransposition,
                                PerturbationKind::kVowelRepDel, PerturbationKind::kRandomSpaces}) {
    const RatioResult r = PerturbationRatio(words, source, kind, config);
    detail += (detail.empty() ? "" : ", ") + std::string(KindName(kind)) + " " + Fmt(r.ratio);
    if (kind != PerturbationKind::kRandomSpaces) {
      c.Expect(r.ratio < 0.6, std::string(KindName(kind)) + " ratio not below 0.6");
    }
  }
  detail += " (" + std::to_string(words.size()) + " words; random-spaces has no threshold)";
  if (!c.ok) detail += "; " + c.Failures();
  return {c.ok, detail};
}

Outcome Pipeline() {
  SyntheticCorpusOptions synth;
  synth.documents = 2400;
  synth.seed = 0;
  const auto corpus = GenerateEngagementCorpus(synth);
  const ConfusablesMap& map = testing::ShippedConfusables();

  auto run = [&](bool defended) {
    PipelineConfig config;
    config.defenses = {defended, defended};
    config.confusables = &map;
    config.perturbation = DefaultPerturbationConfig(map);
    // The synthetic vocabulary has about 200 words, so the whole vocabulary
    // serves as the spelling index.
    config.hyper.rho = 1.0;
    config.hyper.hidden = 200;
    config.embedding_runs = 3;
    config.classifier_runs = 3;
    config.seed = 0;
    return PipelineExperiment(corpus, config);
  };
  const PipelineResult on = run(true);
  const PipelineResult off = run(false);
  const double drop_on = on.clean.mean - on.perturbed.mean;
  const double drop_off = off.clean.mean - off.perturbed.mean;
  const double pooled = std::sqrt((on.clean.std * on.clean.std + off.clean.std * off.clean.std) / 2);
  Checks c;
  c.Expect(on.perturbed.mean < on.clean.mean, "defended: perturbed AUC not below clean");
  c.Expect(off.perturbed.mean < off.clean.mean, "undefended: perturbed AUC not below clean");
  c.Expect(drop_on < drop_off, "defended drop not smaller than undefended drop");
  c.Expect(std::abs(on.clean.mean - off.clean.mean) < 3 * pooled,
           "clean AUCs differ by 3 pooled std-devs or more");
  std::string detail = "ACD+UC clean " + Fmt(on.clean.mean) + "±" + Fmt(on.clean.std) +
                       " perturbed " + Fmt(on.perturbed.mean) + "±" + Fmt(on.perturbed.std) +
                       "; none clean " + Fmt(off.clean.mean) + "±" + Fmt(off.clean.std) +
                       " perturbed " + Fmt(off.perturbed.mean) + "±" + Fmt(off.perturbed.std) +
                       "; drops " + Fmt(drop_on) + " vs " + Fmt(drop_off) + "; clean gap " +
                       Fmt(std::abs(on.clean.mean - off.clean.mean)) + " vs 3 pooled sd " +
                       Fmt(3 * pooled);
  if (!c.ok) detail += "; " + c.Failures();
  return {c.ok, detail};
}

int Shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome Determinism() {
  const fs::path dir = fs::temp_directory_path() / "cw2v_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = std::string("'") + CW2V_CLI_PATH + "'";
  const std::string corpus = (testing::DataDir() / "corpus" / "lee_background.txt").string();
  Checks c;
  for (int i = 0; i < 2; ++i) {
    const std::string tag = std::to_string(i);
    c.Expect(Shell(cli + " --seed 7 train-embed --input '" + corpus + "' --hidden 20 --rho 0.01" +
                   " --max-epochs 3 --output '" + (dir / ("model" + tag + ".json")).string() +
                   "' 2>/dev/null") == 0,
             "train-embed failed");
    c.Expect(Shell(cli + " --seed 7 run-pipeline --synthetic 600 --runs 2x2 --hidden 20" +
                   " --rho 0.5 --json '" + (dir / ("pipe" + tag + ".json")).string() + "' > '" +
                   (dir / ("pipe" + tag + ".tsv")).string() + "' 2>/dev/null") == 0,
             "run-pipeline failed");
  }
  if (c.ok) {
    for (const char* name : {"model", "pipe"}) {
      for (const char* ext : {".json", ".tsv"}) {
        const fs::path a = dir / (std::string(name) + "0" + ext);
        if (!fs::exists(a)) continue;
        const fs::path b = dir / (std::string(name) + "1" + ext);
        c.Expect(ReadFile(a) == ReadFile(b), a.filename().string() + " differs between runs");
        c.Expect(!ReadFile(a).empty(), a.filename().string() + " is empty");
      }
    }
  }
  fs::remove_all(dir);
  return {c.ok, c.ok ? "model file, pipeline TSV and JSON reports byte-identical across two runs"
                     : c.Failures()};
}

Outcome AucOracle() {
  Checks c;
  c.Expect(Auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}) == 0.75,
           "example AUC != 0.75");
  std::mt19937_64 rng(9);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(50), t(50);
    std::vector<int> y(50);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = UniformReal(rng, -2, 2);
      t[i] = std::exp(3 * s[i]) + 1;
      y[i] = static_cast<int>(i % 2);
    }
    Shuffle(y, rng);
    if (Auc(s, y) != Auc(t, y)) ++violations;
  }
  c.Expect(violations == 0, std::to_string(violations) + " monotone-invariance violations");
  return {c.ok, c.ok ? "example = 0.75; invariant on 100 random score vectors" : c.Failures()};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "str_sim oracle", 1, StrSimOracle},
    {2, "defense round trips", 5, DefenseRoundTrips},
    {3, "collision statistics", 30, Collisions},
    {4, "gradient correctness", 10, Gradients},
    {5, "spelling-embedding correlation", 600, Correlation},
    {6, "perturbation ratios", 900, Ratios},
    {7, "pipeline robustness direction", 1200, Pipeline},
    {8, "determinism", 600, Determinism},
    {9, "AUC oracle", 60, AucOracle},
};

bool RunOne(const Criterion& criterion) {
  const auto start = Clock::now();
  Outcome outcome;
  try {
    outcome = criterion.run();
  } catch (const std::exception& e) {
    outcome = {false, std::string("error: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (seconds > criterion.budget_seconds) {
    outcome.pass = false;
    outcome.detail += "; over the " + Fmt(criterion.budget_seconds, 0) + " s budget";
  }
  std::printf("criterion %d %s: %s %s (%.2f s)\n", criterion.id, criterion.name,
              outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str(), seconds);
  std::fflush(stdout);
  return outcome.pass;
}

}  // namespace
}  // namespace cw2v

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  bool all_pass = true;
  bool any = false;
  for (const auto& criterion : cw2v::kCriteria) {
    if (!wanted.empty() && !wanted.count(criterion.id)) continue;
    any = true;
    all_pass = cw2v::RunOne(criterion) && all_pass;
  }
  if (!any) {
    std::fprintf(stderr, "usage: cw2v_acceptance [criterion 1-9 ...]\n");
    return 2;
  }
  return all_pass ? 0 : 1;
}
