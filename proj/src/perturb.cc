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

#include "cw2v/perturb.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "cw2v/defense.h"
#include "cw2v/random.h"
#include "cw2v/unicode.h"

namespace cw2v {
namespace {

struct KindInfo {
  PerturbationKind kind;
  std::string_view name;
  DefenseFamily family;
};

constexpr std::array<KindInfo, 10> kKindInfo = {{
    {PerturbationKind::kCombinedUnicode, "combined-unicode", DefenseFamily::kAcd},
    {PerturbationKind::kFakePunctuation, "fake-punctuation", DefenseFamily::kCw2v},
    {PerturbationKind::kNeighboringKey, "neighboring-key", DefenseFamily::kCw2v},
    {PerturbationKind::kRandomSpaces, "random-spaces", DefenseFamily::kCw2v},
    {PerturbationKind::kReplaceUnicode, "replace-unicode", DefenseFamily::kUc},
    {PerturbationKind::kSpaceSeparation, "space-separation", DefenseFamily::kAcd},
    {PerturbationKind::kTandemCharacter, "tandem-character", DefenseFamily::kUc},
    {PerturbationKind::kTransposition, "transposition", DefenseFamily::kCw2v},
    {PerturbationKind::kVowelRepDel, "vowel-rep-del", DefenseFamily::kCw2v},
    {PerturbationKind::kZeroWidthSeparation, "zero-width-separation", DefenseFamily::kAcd},
}};

const KindInfo& Info(PerturbationKind kind) {
  for (const auto& info : kKindInfo) {
    if (info.kind == kind) return info;
  }
  throw std::logic_error("unknown PerturbationKind");
}

std::u32string Interleave(const std::u32string& word, char32_t sep) {
  std::u32string out;
  out.reserve(word.size() * 2);
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out.push_back(word[i]);
  }
  return out;
}

// Inserts 1..max_inserts characters from `alphabet` into each gap with
// probability p.
std::u32string RandomGapInsert(const std::u32string& word, std::u32string_view alphabet,
                               const PerturbationConfig& config, std::mt19937_64& rng) {
  std::u32string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0 && Bernoulli(rng, config.per_char_probability)) {
      const std::size_t count =
          1 + UniformIndex(rng, static_cast<std::size_t>(config.max_inserts_per_gap));
      for (std::size_t k = 0; k < count; ++k) {
        out.push_back(alphabet[UniformIndex(rng, alphabet.size())]);
      }
    }
    out.push_back(word[i]);
  }
  return out;
}

char32_t NeighborKey(char32_t c, const CharMap& layout, std::mt19937_64& rng) {
  const bool upper = IsUpper(c);
  const char32_t key = upper ? ToLower(c) : c;
  const auto it = layout.find(key);
  if (it == layout.end() || it->second.empty()) return c;
  const char32_t picked = it->second[UniformIndex(rng, it->second.size())];
  return upper ? ToUpper(picked) : picked;
}

}  // namespace

DefenseFamily DefenseFor(PerturbationKind kind) { return Info(kind).family; }

std::string_view KindName(PerturbationKind kind) { return Info(kind).name; }

std::optional<PerturbationKind> ParseKind(std::string_view name) {
  for (const auto& info : kKindInfo) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

void PerturbationConfig::Validate() const {
  if (!(per_char_probability >= 0.0 && per_char_probability <= 1.0)) {
    throw std::invalid_argument("per_char_probability must lie in [0, 1]");
  }
  if (max_inserts_per_gap < 1) throw std::invalid_argument("max_inserts_per_gap must be >= 1");
  if (punctuation_set.empty()) throw std::invalid_argument("punctuation_set is empty");
  for (const auto& [c, seq] : tandem_map) {
    if (seq.size() < 2) {
      throw std::invalid_argument("tandem sequence for '" + ToUtf8(c) + "' is shorter than 2");
    }
  }
}

CharMap QwertyLayout() {
  static constexpr std::array<std::u32string_view, 3> kRows = {U"qwertyuiop", U"asdfghjkl",
                                                               U"zxcvbnm"};
  CharMap layout;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < static_cast<int>(kRows[r].size()); ++c) {
      std::u32string& neighbors = layout[kRows[r][c]];
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr;
          const int cc = c + dc;
          if ((dr == 0 && dc == 0) || rr < 0 || rr >= 3) continue;
          if (cc < 0 || cc >= static_cast<int>(kRows[rr].size())) continue;
          neighbors.push_back(kRows[rr][cc]);
        }
      }
    }
  }
  return layout;
}

CharMap LoadCharMap(const std::filesystem::path& path, bool symmetric) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open character map: " + path.string());
  std::map<char32_t, std::set<char32_t>> sets;
  std::map<char32_t, std::u32string> ordered;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw.front() == '#') continue;
    const auto tab = raw.find('\t');
    const std::u32string key = ToU32(raw.substr(0, tab));
    if (tab == std::string::npos || key.size() != 1) {
      throw ParseError(path.string(), line_no, "expected '<char><TAB><chars>'");
    }
    const std::u32string values = ToU32(raw.substr(tab + 1));
    for (char32_t v : values) {
      if (v == key[0]) continue;
      if (sets[key[0]].insert(v).second) ordered[key[0]].push_back(v);
      if (symmetric && sets[v].insert(key[0]).second) ordered[v].push_back(key[0]);
    }
  }
  return ordered;
}

CharMap LookalikesFrom(const ConfusablesMap& map) {
  CharMap out;
  for (const auto& e : map.entries()) {
    if (e.source.size() == 1 && e.target.size() == 1) out[e.target[0]].push_back(e.source[0]);
  }
  return out;
}

CharMap TandemsFrom(const ConfusablesMap& map) {
  CharMap out;
  for (const auto& e : map.entries()) {
    if (e.source.size() >= 2 && e.target.size() == 1) out.try_emplace(e.target[0], e.source);
  }
  return out;
}

PerturbationConfig DefaultPerturbationConfig(const ConfusablesMap& map, std::uint64_t seed) {
  PerturbationConfig config;
  config.rng_seed = seed;
  config.keyboard_layout = QwertyLayout();
  config.lookalike_map = LookalikesFrom(map);
  config.tandem_map = TandemsFrom(map);
  return config;
}

std::mt19937_64 MakeRng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(MixSeed(seed, stream));
}

std::string PerturbWord(std::string_view word, PerturbationKind kind,
                        const PerturbationConfig& config) {
  return PerturbWord(word, kind, config, 0);
}

std::string PerturbWord(std::string_view word, PerturbationKind kind,
                        const PerturbationConfig& config, std::uint64_t stream) {
  if (word.empty()) throw std::invalid_argument("PerturbWord: empty word");
  const std::u32string chars = ToU32(word);
  std::mt19937_64 rng = MakeRng(config.rng_seed, stream);
  const double p = config.per_char_probability;
  std::u32string out;

  switch (kind) {
    case PerturbationKind::kCombinedUnicode:
      out = Interleave(chars, config.insertion_char);
      break;
    case PerturbationKind::kSpaceSeparation:
      out = Interleave(chars, U' ');
      break;
    case PerturbationKind::kZeroWidthSeparation:
      out = Interleave(chars, kZeroWidthNonJoiner);
      break;
    case PerturbationKind::kFakePunctuation:
      out = RandomGapInsert(chars, config.punctuation_set, config, rng);
      break;
    case PerturbationKind::kRandomSpaces:
      out = RandomGapInsert(chars, U" ", config, rng);
      break;
    case PerturbationKind::kNeighboringKey:
      for (char32_t c : chars) {
        out.push_back(Bernoulli(rng, p) ? NeighborKey(c, config.keyboard_layout, rng) : c);
      }
      break;
    case PerturbationKind::kReplaceUnicode:
      for (char32_t c : chars) {
        const auto it = config.lookalike_map.find(c);
        if (it != config.lookalike_map.end() && !it->second.empty() && Bernoulli(rng, p)) {
          out.push_back(it->second[UniformIndex(rng, it->second.size())]);
        } else {
          out.push_back(c);
        }
      }
      break;
    case PerturbationKind::kTandemCharacter:
      for (char32_t c : chars) {
        const auto it = config.tandem_map.find(c);
        if (it != config.tandem_map.end() && Bernoulli(rng, p)) {
          out += it->second;
        } else {
          out.push_back(c);
        }
      }
      break;
    case PerturbationKind::kTransposition: {
      out = chars;
      std::size_t i = 0;
      while (i + 1 < out.size()) {
        if (Bernoulli(rng, p)) {
          std::swap(out[i], out[i + 1]);
          i += 2;
        } else {
          i += 1;
        }
      }
      break;
    }
    case PerturbationKind::kVowelRepDel:
      for (char32_t c : chars) {
        const bool vowel = config.vowel_set.find(ToLower(c)) != std::u32string::npos;
        if (vowel && Bernoulli(rng, p)) {
          if (Bernoulli(rng, 0.5)) {
            out.push_back(c);
            out.push_back(c);
          }
        } else {
          out.push_back(c);
        }
      }
      break;
  }
  return ToUtf8(out);
}

std::string PerturbDocument(std::string_view text, const PerturbationConfig& config,
                            const KindPolicy& policy) {
  if (!policy.fixed && policy.pool.empty()) {
    throw std::invalid_argument("PerturbDocument: empty kind pool");
  }
  const std::u32string chars = ToU32(text);
  std::string out;
  out.reserve(text.size() * 2);
  std::uint64_t word_index = 0;
  std::size_t i = 0;
  while (i < chars.size()) {
    std::size_t j = i;
    const bool space = IsSpace(chars[i]);
    while (j < chars.size() && IsSpace(chars[j]) == space) ++j;
    const std::u32string_view run(chars.data() + i, j - i);
    if (space || run.size() <= 2) {
      out += ToUtf8(run);
    } else {
      PerturbationKind kind;
      if (policy.fixed) {
        kind = *policy.fixed;
      } else {
        std::mt19937_64 pick = MakeRng(config.rng_seed ^ 0x6b696e64ULL, word_index);
        kind = policy.pool[UniformIndex(pick, policy.pool.size())];
      }
      out += PerturbWord(ToUtf8(run), kind, config, word_index);
    }
    if (!space) ++word_index;
    i = j;
  }
  return out;
}

}  // namespace cw2v
