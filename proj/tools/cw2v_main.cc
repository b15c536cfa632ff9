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

// cw2v: perturb, defend, embed and evaluate text from the command line.
//
// Exit status: 0 success, 1 bad input (flags, files, data), 2 internal error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "cw2v/classify.h"
#include "cw2v/defense.h"
#include "cw2v/eval.h"
#include "cw2v/model.h"
#include "cw2v/perturb.h"
#include "cw2v/random.h"
#include "cw2v/report.h"
#include "cw2v/synthetic.h"
#include "cw2v/tokenize.h"
#include "cw2v/unicode.h"
#include "cw2v/vocab.h"
#include "json.hpp"

#ifndef CW2V_DEFAULT_DATA_DIR
#define CW2V_DEFAULT_DATA_DIR "data"
#endif

namespace cw2v {
namespace {

using Json = nlohmann::ordered_json;

// Bad user input; maps to exit status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::uint64_t seed = 0;
  std::string config;
  std::string data_dir = CW2V_DEFAULT_DATA_DIR;
  std::string input = "-";
  std::string output = "-";
  std::string json;

  bool acd = true;
  bool uc = true;
  std::vector<std::string> kinds;
  double probability = 0.3;

  Hyperparams hyper;
  std::string subsample_mode = "standard";
  std::string pick = "random";
  std::string loss = "softmax-ce";

  std::string model;
  std::string embeddings;
  std::string classifier;
  std::vector<std::string> words;
  std::string word_list;
  std::size_t sample = 0;
  std::size_t min_length = 3;
  std::size_t pairs = 500;
  std::size_t k = 10;
  std::string key = "multiset";
  bool labeled = false;

  LogRegOptions logreg;
  std::string runs = "3x3";
  double test_fraction = 0.3;
  std::string embedding_corpus;
  std::size_t synthetic = 0;
  double label_noise = 0.05;
  std::string grid_hidden = "200,300";
  std::string grid_window = "2,3";
  std::string grid_rho = "0.005,0.01";
};

// One config-file key bound to a command-line option.
struct Binding {
  const CLI::App* owner;
  std::string key;
  CLI::Option* option;
  std::function<void(const Json&)> set;
  std::function<Json()> get;
  bool fingerprinted;
};

class Cli {
 public:
  Cli();
  int Run(int argc, char** argv);

 private:
  template <typename T>
  CLI::Option* Bind(CLI::App* app, const std::string& key, T& target, const std::string& help,
                    bool fingerprinted = true) {
    CLI::Option* opt = app->add_option("--" + key, target, help);
    bindings_.push_back({app, key, opt, [&target](const Json& j) { target = j.get<T>(); },
                         [&target] { return Json(target); }, fingerprinted});
    return opt;
  }
  void BindFlag(CLI::App* app, const std::string& key, bool& target, const std::string& help,
                bool negatable = true) {
    const std::string names = negatable ? "--" + key + ",!--no-" + key : "--" + key;
    CLI::Option* opt = app->add_flag(names, target, help);
    bindings_.push_back({app, key, opt, [&target](const Json& j) { target = j.get<bool>(); },
                         [&target] { return Json(target); }, true});
  }

  void AddIo(CLI::App* app, bool with_json = false);
  void AddDefenses(CLI::App* app);
  void AddHyper(CLI::App* app);
  void AddSource(CLI::App* app);
  void AddPipeline(CLI::App* app);

  void ApplyConfig(const CLI::App* active);
  std::string Fingerprint(const CLI::App* active, const std::string& extra) const;
  void Finalize();

  const ConfusablesMap& Confusables();
  PerturbationConfig PerturbConfig(std::uint64_t seed);
  std::unique_ptr<EmbeddingSource> Source(std::optional<Cw2vModel>& holder);
  std::vector<std::string> InputLines(bool keep_empty) const;
  std::vector<LabeledDoc> LabeledInput() const;
  void Emit(const std::string& text) const;
  void EmitReports(const std::vector<Report>& reports) const;
  DefenseOptions Defenses() const { return {s_.acd, s_.uc}; }
  std::vector<TokenizedDoc> DefendAndTokenize(const std::vector<std::string>& lines);
  PipelineConfig MakePipelineConfig(std::vector<LabeledDoc>& corpus,
                                    std::unique_ptr<EmbeddingSource>& external);

  int Perturb(const CLI::App* self);
  int DeobfuscateCmd(const CLI::App* self);
  int TokenizeCmd(const CLI::App* self);
  int BuildIndex(const CLI::App* self);
  int TrainEmbed(const CLI::App* self);
  int Embed(const CLI::App* self);
  int Nearest(const CLI::App* self);
  int TrainClassifier(const CLI::App* self);
  int Predict(const CLI::App* self);
  int ReportCorrelation(const CLI::App* self);
  int ReportRatios(const CLI::App* self);
  int ReportCollisions(const CLI::App* self);
  int RunPipeline(const CLI::App* self);
  int Sweep(const CLI::App* self);
  int SynthCorpus(const CLI::App* self);

  CLI::App app_{"Adversarial text perturbation, defenses and spelling-aware embeddings.", "cw2v"};
  Settings s_;
  std::vector<Binding> bindings_;
  std::map<const CLI::App*, std::function<int(const CLI::App*)>> handlers_;
  std::optional<ConfusablesMap> confusables_;
};

std::ostream& Out(const std::string& path, std::ofstream& file) {
  if (path == "-") return std::cout;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write " + path);
  return file;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) parts.push_back(item);
  }
  if (parts.empty()) throw InputError("empty list: '" + text + "'");
  return parts;
}

template <typename T>
std::vector<T> ParseList(const std::string& text, const std::string& what) {
  std::vector<T> values;
  for (const auto& part : SplitList(text)) {
    std::istringstream in(part);
    T v{};
    if (!(in >> v) || !in.eof()) throw InputError("bad " + what + " value '" + part + "'");
    values.push_back(v);
  }
  return values;
}

std::string JoinVector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += FormatDouble(v(i));
  }
  return out;
}

void RequireFile(const std::string& path, const std::string& what) {
  if (path.empty()) throw InputError(what + " is required");
  if (!std::filesystem::is_regular_file(path)) throw InputError(what + " not found: " + path);
}

Cli::Cli() {
  app_.require_subcommand(1);
  app_.fallthrough();
  Bind(&app_, "seed", s_.seed, "random seed (default 0)");
  app_.add_option("--config", s_.config, "JSON file mirroring the flags; flags win");
  Bind(&app_, "data-dir", s_.data_dir, "directory with confusables, tandem and keyboard tables",
       false);

  auto add = [this](const std::string& name, const std::string& help,
                    int (Cli::*fn)(const CLI::App*)) {
    CLI::App* sub = app_.add_subcommand(name, help);
    handlers_[sub] = [this, fn](const CLI::App* self) { return (this->*fn)(self); };
    return sub;
  };

  CLI::App* perturb = add("perturb", "apply adversarial perturbations, one document per line",
                          &Cli::Perturb);
  AddIo(perturb);
  Bind(perturb, "kind", s_.kinds, "perturbation kind, or 'random' (default: random kind per word)");
  Bind(perturb, "probability", s_.probability, "per-character attack probability");

  CLI::App* deob = add("deobfuscate", "apply ACD then UC, one document per line",
                       &Cli::DeobfuscateCmd);
  AddIo(deob);
  AddDefenses(deob);

  CLI::App* tok = add("tokenize", "lowercase and split into words, one document per line",
                      &Cli::TokenizeCmd);
  AddIo(tok);

  CLI::App* index = add("build-index", "select the spelling index of a corpus", &Cli::BuildIndex);
  AddIo(index);
  AddDefenses(index);
  AddHyper(index);

  CLI::App* train = add("train-embed", "train a CW2V model on a corpus", &Cli::TrainEmbed);
  AddIo(train);
  AddDefenses(train);
  AddHyper(train);

  CLI::App* embed = add("embed", "print embeddings of words", &Cli::Embed);
  AddIo(embed);
  Bind(embed, "model", s_.model, "CW2V model file", false)->required();
  Bind(embed, "word", s_.words, "word to embed (repeatable); otherwise one word per input line");

  CLI::App* nearest = add("nearest", "nearest corpus words by cosine distance", &Cli::Nearest);
  AddIo(nearest);
  Bind(nearest, "model", s_.model, "CW2V model file", false)->required();
  Bind(nearest, "word", s_.words, "query word (repeatable)")->required();
  Bind(nearest, "k", s_.k, "neighbors per query");

  CLI::App* tc = add("train-classifier", "fit logistic regression on averaged embeddings",
                     &Cli::TrainClassifier);
  AddIo(tc);
  AddDefenses(tc);
  AddSource(tc);
  Bind(tc, "l2", s_.logreg.l2, "L2 strength");
  Bind(tc, "clf-epochs", s_.logreg.epochs, "gradient descent epochs");
  Bind(tc, "clf-lr", s_.logreg.learning_rate, "gradient descent step size");

  CLI::App* predict = add("predict", "score documents with a trained classifier", &Cli::Predict);
  AddIo(predict, true);
  AddSource(predict);
  Bind(predict, "classifier", s_.classifier, "classifier file", false)->required();
  BindFlag(predict, "labeled", s_.labeled, "input is '<label>\\t<text>'; also report AUC", false);

  CLI::App* corr = add("report-correlation", "Levenshtein vs cosine distance correlation",
                       &Cli::ReportCorrelation);
  AddIo(corr, true);
  AddSource(corr);
  Bind(corr, "words", s_.word_list, "word list (one per line) to sample from instead of --input",
       false);
  Bind(corr, "sample", s_.sample, "words to sample (default 100)");
  Bind(corr, "min-length", s_.min_length, "minimum word length in code points");

  CLI::App* ratios = add("report-ratios", "perturbation distance ratios", &Cli::ReportRatios);
  AddIo(ratios, true);
  AddSource(ratios);
  Bind(ratios, "words", s_.word_list, "word list (one per line) to sample from instead of --input",
       false);
  Bind(ratios, "sample", s_.sample, "words to sample (default 500)");
  Bind(ratios, "min-length", s_.min_length, "minimum word length in code points");
  Bind(ratios, "kind", s_.kinds, "perturbation kind (repeatable; default all)");
  Bind(ratios, "probability", s_.probability, "per-character attack probability");
  Bind(ratios, "pairs", s_.pairs, "random pairs in the denominator");

  CLI::App* coll = add("report-collisions", "bag-of-characters collisions of a word list",
                       &Cli::ReportCollisions);
  AddIo(coll, true);
  Bind(coll, "key", s_.key, "multiset (characters with counts) or set (distinct characters)");

  CLI::App* pipe = add("run-pipeline", "perturbation/defense classification experiment",
                       &Cli::RunPipeline);
  AddPipeline(pipe);

  CLI::App* sweep = add("sweep", "run-pipeline over a hyperparameter grid", &Cli::Sweep);
  AddPipeline(sweep);
  Bind(sweep, "grid-hidden", s_.grid_hidden, "comma-separated hidden sizes");
  Bind(sweep, "grid-window", s_.grid_window, "comma-separated windows");
  Bind(sweep, "grid-rho", s_.grid_rho, "comma-separated index fractions");

  CLI::App* synth = add("synth-corpus", "write a synthetic labeled engagement-bait corpus",
                        &Cli::SynthCorpus);
  AddIo(synth);
  Bind(synth, "documents", s_.synthetic, "number of documents (default 2400)");
  Bind(synth, "label-noise", s_.label_noise, "fraction of flipped labels");
}

void Cli::AddIo(CLI::App* app, bool with_json) {
  Bind(app, "input", s_.input, "input file, '-' for stdin", false);
  Bind(app, "output", s_.output, "output file, '-' for stdout", false);
  if (with_json) Bind(app, "json", s_.json, "also write reports as JSON to this file", false);
}

void Cli::AddDefenses(CLI::App* app) {
  BindFlag(app, "acd", s_.acd, "Alternating Characters Defense (default on)");
  BindFlag(app, "uc", s_.uc, "Unicode canonicalization (default on)");
}

void Cli::AddHyper(CLI::App* app) {
  Bind(app, "rho", s_.hyper.rho, "spelling index size as a fraction of the vocabulary");
  Bind(app, "hidden", s_.hyper.hidden, "embedding size");
  Bind(app, "window", s_.hyper.window, "context window in words");
  Bind(app, "patience", s_.hyper.patience, "epochs without improvement before stopping");
  Bind(app, "subsample-t", s_.hyper.subsample_t, "subsampling threshold");
  Bind(app, "subsample-mode", s_.subsample_mode, "standard or paper-literal");
  Bind(app, "pick", s_.pick, "cluster representative: random or medoid");
  Bind(app, "lr", s_.hyper.learning_rate, "SGD learning rate");
  Bind(app, "batch-size", s_.hyper.batch_size, "pairs per SGD step");
  Bind(app, "max-epochs", s_.hyper.max_epochs, "epoch limit");
  Bind(app, "min-count", s_.hyper.min_count, "minimum word count for the vocabulary");
  Bind(app, "max-cluster-words", s_.hyper.max_cluster_words, "words considered for the index");
  Bind(app, "loss", s_.loss, "softmax-ce or squared-error");
}

void Cli::AddSource(CLI::App* app) {
  Bind(app, "model", s_.model, "CW2V model file", false);
  Bind(app, "embeddings", s_.embeddings, "text embedding table ('word v1 ... vh' per line)", false);
}

void Cli::AddPipeline(CLI::App* app) {
  AddIo(app, true);
  AddDefenses(app);
  AddHyper(app);
  Bind(app, "embeddings", s_.embeddings, "use this embedding table instead of training CW2V",
       false);
  Bind(app, "embedding-corpus", s_.embedding_corpus,
       "extra unlabeled text (one document per line) for CW2V training", false);
  Bind(app, "synthetic", s_.synthetic, "generate this many synthetic documents instead of --input");
  Bind(app, "label-noise", s_.label_noise, "label noise of the synthetic corpus");
  Bind(app, "kind", s_.kinds, "attack kind(s) for the test split (default: all, random per word)");
  Bind(app, "probability", s_.probability, "per-character attack probability");
  Bind(app, "runs", s_.runs, "embedding x classifier runs, e.g. 3x3 (a single number N means NxN)");
  Bind(app, "test-fraction", s_.test_fraction, "held-out fraction");
  Bind(app, "l2", s_.logreg.l2, "L2 strength");
  Bind(app, "clf-epochs", s_.logreg.epochs, "gradient descent epochs");
  Bind(app, "clf-lr", s_.logreg.learning_rate, "gradient descent step size");
}

void Cli::ApplyConfig(const CLI::App* active) {
  if (s_.config.empty()) return;
  RequireFile(s_.config, "config file");
  Json doc;
  try {
    doc = Json::parse(ReadFile(s_.config));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(s_.config + ": " + e.what());
  }
  if (!doc.is_object()) throw InputError(s_.config + ": expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (auto& b : bindings_) {
      if (b.key != key) continue;
      known = true;
      if ((b.owner == active || b.owner == &app_) && b.option->count() == 0) {
        try {
          b.set(value);
        } catch (const nlohmann::json::exception& e) {
          throw InputError(s_.config + ": bad value for '" + key + "': " + e.what());
        }
      }
    }
    if (!known) throw InputError(s_.config + ": unknown key '" + key + "'");
  }
}

void Cli::Finalize() {
  const auto mode = ParseSubsampleMode(s_.subsample_mode);
  if (!mode) throw InputError("--subsample-mode must be standard or paper-literal");
  s_.hyper.subsample_mode = *mode;
  const auto pick = ParsePick(s_.pick);
  if (!pick) throw InputError("--pick must be random or medoid");
  s_.hyper.pick = *pick;
  if (s_.loss == "softmax-ce") {
    s_.hyper.loss = LossKind::kSoftmaxCrossEntropy;
  } else if (s_.loss == "squared-error") {
    s_.hyper.loss = LossKind::kSquaredError;
  } else {
    throw InputError("--loss must be softmax-ce or squared-error");
  }
  s_.hyper.seed = s_.seed;
  s_.logreg.seed = s_.seed;
}

std::string Cli::Fingerprint(const CLI::App* active, const std::string& extra) const {
  std::map<std::string, Json> values;
  for (const auto& b : bindings_) {
    if (b.fingerprinted && (b.owner == active || b.owner == &app_)) values[b.key] = b.get();
  }
  Json doc;
  doc["command"] = active->get_name();
  for (auto& [k, v] : values) doc[k] = v;
  return HexDigest(Fnv1a64(doc.dump() + "|" + extra));
}

const ConfusablesMap& Cli::Confusables() {
  if (!confusables_) {
    const std::filesystem::path dir(s_.data_dir);
    const auto table = dir / "confusables.txt";
    RequireFile(table.string(), "confusables table");
    std::vector<std::pair<std::filesystem::path, ConfusablesRole>> files = {
        {table, ConfusablesRole::kUnicodeTable}};
    for (const char* extra : {"latin_diacritics.txt", "tandem.txt"}) {
      if (std::filesystem::is_regular_file(dir / extra)) {
        files.emplace_back(dir / extra, ConfusablesRole::kSupplement);
      }
    }
    confusables_.emplace(LoadConfusables(files));
  }
  return *confusables_;
}

PerturbationConfig Cli::PerturbConfig(std::uint64_t seed) {
  PerturbationConfig config = DefaultPerturbationConfig(Confusables(), seed);
  const auto keyboard = std::filesystem::path(s_.data_dir) / "keyboard_qwerty.tsv";
  if (std::filesystem::is_regular_file(keyboard)) config.keyboard_layout = LoadCharMap(keyboard, false);
  config.per_char_probability = s_.probability;
  config.Validate();
  return config;
}

std::unique_ptr<EmbeddingSource> Cli::Source(std::optional<Cw2vModel>& holder) {
  if (!s_.model.empty() == !s_.embeddings.empty()) {
    throw InputError("exactly one of --model and --embeddings is required");
  }
  if (!s_.model.empty()) {
    RequireFile(s_.model, "model");
    holder.emplace(LoadModel(s_.model));
    return std::make_unique<Cw2vEmbeddings>(*holder);
  }
  RequireFile(s_.embeddings, "embedding table");
  return std::make_unique<TableEmbeddings>(TableEmbeddings::Load(s_.embeddings));
}

std::vector<std::string> Cli::InputLines(bool keep_empty) const {
  std::vector<std::string> lines;
  std::ifstream file;
  std::istream* in = &std::cin;
  if (s_.input != "-") {
    RequireFile(s_.input, "input");
    file.open(s_.input, std::ios::binary);
    in = &file;
  }
  for (std::string line; std::getline(*in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (keep_empty || !line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<LabeledDoc> Cli::LabeledInput() const {
  if (s_.input == "-") return ParseLabeledCorpus(std::cin, "stdin");
  RequireFile(s_.input, "input");
  std::ifstream in(s_.input, std::ios::binary);
  return ParseLabeledCorpus(in, s_.input);
}

void Cli::Emit(const std::string& text) const {
  std::ofstream file;
  std::ostream& out = Out(s_.output, file);
  out << text;
  out.flush();
  if (!out) throw InputError("write failed: " + s_.output);
}

void Cli::EmitReports(const std::vector<Report>& reports) const {
  Emit(ReportsToTsv(reports));
  if (!s_.json.empty()) {
    try {
      WriteFile(s_.json, ReportsToJson(reports));
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
  }
}

std::vector<TokenizedDoc> Cli::DefendAndTokenize(const std::vector<std::string>& lines) {
  const DefenseOptions defenses = Defenses();
  const ConfusablesMap* map = defenses.uc ? &Confusables() : nullptr;
  std::vector<TokenizedDoc> docs;
  docs.reserve(lines.size());
  for (const auto& line : lines) {
    docs.push_back(Tokenize(defenses.acd || defenses.uc ? Deobfuscate(line, defenses, map) : line));
  }
  return docs;
}

// Streams documents through `fn`, one line at a time.
template <typename Fn>
void StreamLines(const std::string& input, const std::string& output, Fn fn) {
  std::ifstream in_file;
  std::istream* in = &std::cin;
  if (input != "-") {
    RequireFile(input, "input");
    in_file.open(input, std::ios::binary);
    in = &in_file;
  }
  std::ofstream out_file;
  std::ostream& out = Out(output, out_file);
  std::uint64_t index = 0;
  for (std::string line; std::getline(*in, line); ++index) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out << fn(line, index) << '\n';
  }
  out.flush();
  if (!out) throw InputError("write failed: " + output);
}

int Cli::Perturb(const CLI::App*) {
  KindPolicy policy = KindPolicy::UniformRandom();
  if (!s_.kinds.empty() && !(s_.kinds.size() == 1 && s_.kinds[0] == "random")) {
    policy.pool.clear();
    for (const auto& name : s_.kinds) {
      const auto kind = ParseKind(name);
      if (!kind) throw InputError("unknown perturbation kind: " + name);
      policy.pool.push_back(*kind);
    }
    if (policy.pool.size() == 1) policy = KindPolicy::Fixed(policy.pool[0]);
  }
  PerturbationConfig config = PerturbConfig(s_.seed);
  StreamLines(s_.input, s_.output, [&](const std::string& line, std::uint64_t i) {
    config.rng_seed = MixSeed(s_.seed, i);
    return PerturbDocument(line, config, policy);
  });
  return 0;
}

int Cli::DeobfuscateCmd(const CLI::App*) {
  const DefenseOptions defenses = Defenses();
  const ConfusablesMap* map = defenses.uc ? &Confusables() : nullptr;
  StreamLines(s_.input, s_.output, [&](const std::string& line, std::uint64_t) {
    return Deobfuscate(line, defenses, map);
  });
  return 0;
}

int Cli::TokenizeCmd(const CLI::App*) {
  StreamLines(s_.input, s_.output, [](const std::string& line, std::uint64_t) {
    const TokenizedDoc doc = Tokenize(line);
    std::string out;
    for (const auto& t : doc.tokens) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    return out;
  });
  return 0;
}

int Cli::BuildIndex(const CLI::App* self) {
  s_.hyper.Validate();
  const std::vector<TokenizedDoc> docs = DefendAndTokenize(InputLines(false));
  const Vocabulary vocab = Vocabulary::Build(docs, s_.hyper.min_count);
  ClusterOptions options;
  options.n = std::min(IndexSizeFor(vocab.size(), s_.hyper.rho),
                       std::min(vocab.size(), s_.hyper.max_cluster_words));
  options.seed = s_.seed;
  options.pick = s_.hyper.pick;
  options.max_cluster_words = s_.hyper.max_cluster_words;
  const SpellingIndex index = ClusterIndex(vocab, options);
  Json doc;
  doc["format"] = "cw2v-index";
  doc["seed"] = s_.seed;
  doc["fingerprint"] = Fingerprint(self, CorpusDigest(docs));
  doc["vocabulary"] = vocab.size();
  doc["candidates"] = index.candidates;
  doc["n"] = index.words.size();
  doc["pick"] = PickName(options.pick);
  doc["words"] = index.words;
  Emit(doc.dump(2) + "\n");
  return 0;
}

int Cli::TrainEmbed(const CLI::App* self) {
  s_.hyper.Validate();
  const std::vector<TokenizedDoc> docs = DefendAndTokenize(InputLines(false));
  Cw2vModel model = BuildAndTrainCw2v(docs, s_.hyper);
  model.fingerprint = Fingerprint(self, model.fingerprint);
  Emit(SerializeModel(model));
  const auto& losses = model.training.epoch_losses;
  std::fprintf(stderr, "trained n=%ld h=%ld epochs=%zu final_loss=%s fingerprint=%s\n",
               static_cast<long>(model.n()), static_cast<long>(model.h()), losses.size(),
               FormatDouble(losses.back()).c_str(), model.fingerprint.c_str());
  return 0;
}

int Cli::Embed(const CLI::App*) {
  RequireFile(s_.model, "model");
  const Cw2vModel model = LoadModel(s_.model);
  std::string out;
  if (!s_.words.empty()) {
    for (const auto& w : s_.words) {
      if (w.empty()) throw InputError("--word must not be empty");
      out += JoinVector(model.Embed(w)) + "\n";
    }
  } else {
    for (const auto& w : InputLines(false)) out += w + " " + JoinVector(model.Embed(w)) + "\n";
  }
  Emit(out);
  return 0;
}

int Cli::Nearest(const CLI::App*) {
  if (s_.k == 0) throw InputError("--k must be >= 1");
  RequireFile(s_.model, "model");
  const Cw2vModel model = LoadModel(s_.model);
  std::vector<std::string> candidates;
  {
    std::unordered_set<std::string> seen;
    for (const auto& line : InputLines(false)) {
      for (auto& t : Tokenize(line).tokens) {
        if (seen.insert(t).second) candidates.push_back(std::move(t));
      }
    }
  }
  if (candidates.empty()) throw InputError("no candidate words in the input corpus");
  Eigen::MatrixXd table(static_cast<Eigen::Index>(candidates.size()), model.h());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    table.row(static_cast<Eigen::Index>(i)) = model.Embed(candidates[i]).normalized().transpose();
  }
  std::string out;
  for (const auto& query : s_.words) {
    if (query.empty()) throw InputError("--word must not be empty");
    const Eigen::VectorXd sims = table * model.Embed(query).normalized();
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i] != query) order.push_back(i);
    }
    const std::size_t take = std::min(s_.k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        const auto ia = static_cast<Eigen::Index>(a);
                        const auto ib = static_cast<Eigen::Index>(b);
                        return sims(ia) != sims(ib) ? sims(ia) > sims(ib)
                                                    : candidates[a] < candidates[b];
                      });
    for (std::size_t r = 0; r < take; ++r) {
      out += query + "\t" + candidates[order[r]] + "\t" +
             FormatDouble(1.0 - sims(static_cast<Eigen::Index>(order[r]))) + "\n";
    }
  }
  Emit(out);
  return 0;
}

int Cli::TrainClassifier(const CLI::App* self) {
  std::optional<Cw2vModel> holder;
  const auto source = Source(holder);
  const std::vector<LabeledDoc> corpus = LabeledInput();
  std::vector<std::string> texts;
  std::vector<int> labels;
  for (const auto& d : corpus) {
    texts.push_back(d.text);
    labels.push_back(d.label);
  }
  const std::vector<TokenizedDoc> docs = DefendAndTokenize(texts);
  const LogRegModel clf = TrainLogReg(FeaturizeAll(docs, *source), labels, s_.logreg);
  Json doc;
  doc["format"] = "cw2v-classifier";
  doc["version"] = 1;
  doc["seed"] = s_.seed;
  doc["fingerprint"] = Fingerprint(self, source->Describe() + CorpusDigest(docs));
  doc["acd"] = s_.acd;
  doc["uc"] = s_.uc;
  doc["embedding"] = source->Describe();
  doc["logreg"] = Json::parse(SerializeLogReg(clf));
  Emit(doc.dump() + "\n");
  return 0;
}

int Cli::Predict(const CLI::App* self) {
  RequireFile(s_.classifier, "classifier");
  Json doc;
  try {
    doc = Json::parse(ReadFile(s_.classifier));
    if (doc.at("format").get<std::string>() != "cw2v-classifier") {
      throw InputError(s_.classifier + ": not a classifier file");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(s_.classifier + ": " + e.what());
  }
  const LogRegModel clf = ParseLogReg(doc.at("logreg").dump(), s_.classifier);
  std::optional<Cw2vModel> holder;
  const auto source = Source(holder);
  if (source->Describe() != doc.at("embedding").get<std::string>()) {
    throw InputError("embeddings differ from the ones the classifier was trained with (" +
                     doc.at("embedding").get<std::string>() + ")");
  }
  s_.acd = doc.at("acd").get<bool>();
  s_.uc = doc.at("uc").get<bool>();

  std::vector<std::string> texts;
  std::vector<int> labels;
  if (s_.labeled) {
    for (auto& d : LabeledInput()) {
      texts.push_back(std::move(d.text));
      labels.push_back(d.label);
    }
  } else {
    texts = InputLines(true);
  }
  const std::vector<TokenizedDoc> docs = DefendAndTokenize(texts);
  const Eigen::MatrixXd features = FeaturizeAll(docs, *source);
  const Eigen::VectorXd scores = clf.ScoreAll(features);
  std::string out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const double p = clf.Probability(features.row(static_cast<Eigen::Index>(i)).transpose());
    if (s_.labeled) out += std::to_string(labels[i]) + "\t";
    out += FormatDouble(p) + "\n";
  }
  Emit(out);
  if (s_.labeled) {
    const double auc = Auc(std::span(scores.data(), scores.size()), labels);
    std::fprintf(stderr, "auc\t%s\n", FormatDouble(auc).c_str());
    if (!s_.json.empty()) {
      WriteFile(s_.json, ReportsToJson({{"auc", auc, labels.size(), s_.seed,
                                         Fingerprint(self, CorpusDigest(docs))}}));
    }
  }
  return 0;
}

// Word sample for the report commands: uniform from --words, otherwise
// frequency-weighted from the tokens of --input.
std::vector<std::string> ReportWords(const Settings& s, const std::vector<std::string>& lines,
                                     std::size_t count, std::string& digest) {
  if (!s.word_list.empty()) {
    RequireFile(s.word_list, "word list");
    const std::vector<std::string> words = ReadLines(s.word_list);
    std::vector<std::string> eligible;
    for (const auto& w : words) {
      if (CodePointLength(w) >= s.min_length) eligible.push_back(w);
    }
    digest = HexDigest(Fnv1a64(ReadFile(s.word_list)));
    return SampleWords(eligible, count, s.seed);
  }
  std::vector<TokenizedDoc> docs;
  for (const auto& line : lines) docs.push_back(Tokenize(line));
  digest = CorpusDigest(docs);
  return SampleCorpusWords(docs, count, s.min_length, s.seed);
}

int Cli::ReportCorrelation(const CLI::App* self) {
  std::optional<Cw2vModel> holder;
  const auto source = Source(holder);
  std::string digest;
  const auto lines = s_.word_list.empty() ? InputLines(false) : std::vector<std::string>{};
  const auto words = ReportWords(s_, lines, s_.sample ? s_.sample : 100, digest);
  const CorrelationResult r = CorrelationReport(words, *source);
  const std::string fp = Fingerprint(self, source->Describe() + digest);
  EmitReports({{"pearson", r.pearson, r.words, s_.seed, fp},
               {"spearman", r.spearman, r.words, s_.seed, fp}});
  return 0;
}

int Cli::ReportRatios(const CLI::App* self) {
  std::optional<Cw2vModel> holder;
  const auto source = Source(holder);
  std::vector<PerturbationKind> kinds;
  for (const auto& name : s_.kinds) {
    const auto kind = ParseKind(name);
    if (!kind) throw InputError("unknown perturbation kind: " + name);
    kinds.push_back(*kind);
  }
  if (kinds.empty()) kinds.assign(kAllPerturbationKinds.begin(), kAllPerturbationKinds.end());
  std::string digest;
  const auto lines = s_.word_list.empty() ? InputLines(false) : std::vector<std::string>{};
  const auto words = ReportWords(s_, lines, s_.sample ? s_.sample : 500, digest);
  const PerturbationConfig config = PerturbConfig(s_.seed);
  const std::string fp = Fingerprint(self, source->Describe() + digest);
  std::vector<Report> reports;
  for (PerturbationKind kind : kinds) {
    const RatioResult r = PerturbationRatio(words, *source, kind, config, s_.pairs);
    reports.push_back({"ratio/" + std::string(KindName(kind)), r.ratio, r.words, s_.seed, fp});
  }
  EmitReports(reports);
  return 0;
}

int Cli::ReportCollisions(const CLI::App* self) {
  CollisionKey key;
  if (s_.key == "multiset") {
    key = CollisionKey::kMultiset;
  } else if (s_.key == "set") {
    key = CollisionKey::kSet;
  } else {
    throw InputError("--key must be multiset or set");
  }
  const std::vector<std::string> words = InputLines(false);
  const CollisionResult r = CollisionReport(words, key);
  std::uint64_t hash = Fnv1a64("");
  for (const auto& w : words) hash = Fnv1a64(w + "\n", hash);
  const std::string fp = Fingerprint(self, HexDigest(hash));
  const std::size_t n = r.total_words;
  EmitReports({{"colliding_words", static_cast<double>(r.colliding_words), n, s_.seed, fp},
               {"mean_words_per_bag", r.mean_words_per_bag, n, s_.seed, fp},
               {"max_words_per_bag", static_cast<double>(r.max_words_per_bag), n, s_.seed, fp},
               {"total_words", static_cast<double>(r.total_words), n, s_.seed, fp},
               {"bags", static_cast<double>(r.bags), n, s_.seed, fp}});
  return 0;
}

PipelineConfig Cli::MakePipelineConfig(std::vector<LabeledDoc>& corpus,
                                       std::unique_ptr<EmbeddingSource>& external) {
  if (s_.synthetic > 0) {
    SyntheticCorpusOptions options;
    options.documents = s_.synthetic;
    options.label_noise = s_.label_noise;
    options.seed = s_.seed;
    corpus = GenerateEngagementCorpus(options);
  } else {
    corpus = LabeledInput();
  }
  PipelineConfig config;
  config.test_fraction = s_.test_fraction;
  config.defenses = Defenses();
  config.confusables = &Confusables();
  config.perturbation = PerturbConfig(s_.seed);
  if (!s_.kinds.empty() && !(s_.kinds.size() == 1 && s_.kinds[0] == "random")) {
    config.kinds.pool.clear();
    for (const auto& name : s_.kinds) {
      const auto kind = ParseKind(name);
      if (!kind) throw InputError("unknown perturbation kind: " + name);
      config.kinds.pool.push_back(*kind);
    }
  }
  config.hyper = s_.hyper;
  if (!s_.embedding_corpus.empty()) {
    RequireFile(s_.embedding_corpus, "embedding corpus");
    config.embedding_corpus = ReadLines(s_.embedding_corpus);
  }
  if (!s_.embeddings.empty()) {
    RequireFile(s_.embeddings, "embedding table");
    external = std::make_unique<TableEmbeddings>(TableEmbeddings::Load(s_.embeddings));
    config.external = external.get();
  }
  config.classifier = s_.logreg;
  const auto runs = [&] {
    const auto x = s_.runs.find('x');
    try {
      std::size_t used = 0;
      const int r = std::stoi(s_.runs.substr(0, x), &used);
      if (x == std::string::npos) {
        if (used != s_.runs.size()) throw InputError("");
        return std::pair{r, r};
      }
      const std::string tail = s_.runs.substr(x + 1);
      const int c = std::stoi(tail, &used);
      if (used != tail.size()) throw InputError("");
      return std::pair{r, c};
    } catch (const std::exception&) {
      throw InputError("--runs must look like 3x3 or 3");
    }
  }();
  if (runs.first < 1 || runs.second < 1) throw InputError("--runs counts must be >= 1");
  config.embedding_runs = runs.first;
  config.classifier_runs = runs.second;
  config.seed = s_.seed;
  return config;
}

std::vector<Report> PipelineReports(const PipelineResult& r, std::uint64_t seed,
                                    const std::string& fp, const std::string& prefix) {
  const std::size_t n = r.runs.size();
  std::vector<Report> reports = {
      {prefix + "clean_auc_mean", r.clean.mean, n, seed, fp},
      {prefix + "clean_auc_std", r.clean.std, n, seed, fp},
      {prefix + "perturbed_auc_mean", r.perturbed.mean, n, seed, fp},
      {prefix + "perturbed_auc_std", r.perturbed.std, n, seed, fp},
  };
  for (const auto& run : r.runs) {
    const std::string tag =
        prefix + "run" + std::to_string(run.embedding_run) + "." + std::to_string(run.classifier_run);
    reports.push_back({tag + "/clean_auc", run.clean_auc, r.test_docs, seed, fp});
    reports.push_back({tag + "/perturbed_auc", run.perturbed_auc, r.test_docs, seed, fp});
  }
  return reports;
}

int Cli::RunPipeline(const CLI::App* self) {
  std::vector<LabeledDoc> corpus;
  std::unique_ptr<EmbeddingSource> external;
  const PipelineConfig config = MakePipelineConfig(corpus, external);
  const PipelineResult result = PipelineExperiment(corpus, config);
  EmitReports(PipelineReports(result, s_.seed, Fingerprint(self, result.fingerprint), ""));
  return 0;
}

int Cli::Sweep(const CLI::App* self) {
  std::vector<LabeledDoc> corpus;
  std::unique_ptr<EmbeddingSource> external;
  const PipelineConfig config = MakePipelineConfig(corpus, external);
  const auto hidden = ParseList<int>(s_.grid_hidden, "--grid-hidden");
  const auto windows = ParseList<int>(s_.grid_window, "--grid-window");
  const auto rhos = ParseList<double>(s_.grid_rho, "--grid-rho");
  const auto points = HyperparameterSweep(corpus, config, hidden, windows, rhos);

  std::string table = "hidden\twindow\trho\tclean_auc_mean\tclean_auc_std\tperturbed_auc_mean\t"
                      "perturbed_auc_std\truns\tseed\tfingerprint\n";
  Json doc;
  doc["seed"] = s_.seed;
  doc["points"] = Json::array();
  for (const auto& p : points) {
    const std::string fp = Fingerprint(self, p.result.fingerprint);
    table += std::to_string(p.hidden) + "\t" + std::to_string(p.window) + "\t" +
             FormatDouble(p.rho) + "\t" + FormatDouble(p.result.clean.mean) + "\t" +
             FormatDouble(p.result.clean.std) + "\t" + FormatDouble(p.result.perturbed.mean) + "\t" +
             FormatDouble(p.result.perturbed.std) + "\t" + std::to_string(p.result.runs.size()) +
             "\t" + std::to_string(s_.seed) + "\t" + fp + "\n";
    Json item;
    item["hidden"] = p.hidden;
    item["window"] = p.window;
    item["rho"] = p.rho;
    item["clean_auc_mean"] = p.result.clean.mean;
    item["clean_auc_std"] = p.result.clean.std;
    item["perturbed_auc_mean"] = p.result.perturbed.mean;
    item["perturbed_auc_std"] = p.result.perturbed.std;
    item["runs"] = p.result.runs.size();
    item["fingerprint"] = fp;
    doc["points"].push_back(std::move(item));
  }
  Emit(table);
  if (!s_.json.empty()) WriteFile(s_.json, doc.dump(2) + "\n");
  return 0;
}

int Cli::SynthCorpus(const CLI::App*) {
  SyntheticCorpusOptions options;
  if (s_.synthetic > 0) options.documents = s_.synthetic;
  options.label_noise = s_.label_noise;
  options.seed = s_.seed;
  Emit(FormatLabeledCorpus(GenerateEngagementCorpus(options)));
  return 0;
}

int Cli::Run(int argc, char** argv) {
  try {
    app_.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app_.exit(e) == 0 ? 0 : 1;
  }
  const CLI::App* active = nullptr;
  for (const auto& [sub, fn] : handlers_) {
    if (sub->parsed()) active = sub;
  }
  try {
    ApplyConfig(active);
    Finalize();
    return handlers_.at(active)(active);
  } catch (const InputError& e) {
    std::fprintf(stderr, "cw2v: %s\n", e.what());
  } catch (const ParseError& e) {
    std::fprintf(stderr, "cw2v: %s\n", e.what());
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "cw2v: %s\n", e.what());
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "cw2v: %s\n", e.what());
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "cw2v: %s\n", e.what());
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "cw2v: %s\n", e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cw2v: internal error: %s\n", e.what());
    return 2;
  }
  return 1;
}

}  // namespace
}  // namespace cw2v

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  cw2v::Cli cli;
  return cli.Run(argc, argv);
}
