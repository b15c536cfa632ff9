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

// Character-level adversarial perturbations.
//
// Every attack is a pure function of (word, kind, config). Randomized attacks
// draw from a generator seeded by the config seed mixed with a stream id, so
// document-level attacks are reproducible word by word.

#ifndef CW2V_PERTURB_H_
#define CW2V_PERTURB_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace cw2v {

class ConfusablesMap;

enum class PerturbationKind {
  kCombinedUnicode,
  kFakePunctuation,
  kNeighboringKey,
  kRandomSpaces,
  kReplaceUnicode,
  kSpaceSeparation,
  kTandemCharacter,
  kTransposition,
  kVowelRepDel,
  kZeroWidthSeparation,
};

inline constexpr std::array<PerturbationKind, 10> kAllPerturbationKinds = {
    PerturbationKind::kCombinedUnicode,  PerturbationKind::kFakePunctuation,
    PerturbationKind::kNeighboringKey,   PerturbationKind::kRandomSpaces,
    PerturbationKind::kReplaceUnicode,   PerturbationKind::kSpaceSeparation,
    PerturbationKind::kTandemCharacter,  PerturbationKind::kTransposition,
    PerturbationKind::kVowelRepDel,      PerturbationKind::kZeroWidthSeparation,
};

// Which defense is responsible for undoing an attack.
enum class DefenseFamily { kAcd, kUc, kCw2v };
DefenseFamily DefenseFor(PerturbationKind kind);

// Kebab-case names, e.g. "space-separation".
std::string_view KindName(PerturbationKind kind);
std::optional<PerturbationKind> ParseKind(std::string_view name);

// Character -> candidate characters (keyboard, look-alikes) or
// character -> replacement sequence (tandem).
using CharMap = std::map<char32_t, std::u32string>;

struct PerturbationConfig {
  std::uint64_t rng_seed = 0;
  char32_t insertion_char = U'.';
  std::u32string punctuation_set = U".,!?;:'-*";
  int max_inserts_per_gap = 1;
  // Rate for every attack that hits "zero or more" positions.
  double per_char_probability = 0.3;
  CharMap keyboard_layout;
  CharMap lookalike_map;
  CharMap tandem_map;
  std::u32string vowel_set = U"aeiou";

  // Throws std::invalid_argument on out-of-range fields.
  void Validate() const;
};

// Letter adjacency on a QWERTY grid (8-neighborhood), symmetric.
CharMap QwertyLayout();

// Reads `<char><TAB><chars>` lines ('#' comments). With `symmetric`, every
// adjacency a->b also adds b->a.
CharMap LoadCharMap(const std::filesystem::path& path, bool symmetric);

// Inverts single-character entries of a UC map: target -> all sources.
CharMap LookalikesFrom(const ConfusablesMap& map);
// Inverts multi-character entries of a UC map: target -> first source listed.
CharMap TandemsFrom(const ConfusablesMap& map);

// Config with QWERTY adjacency and look-alike/tandem tables derived from `map`.
PerturbationConfig DefaultPerturbationConfig(const ConfusablesMap& map, std::uint64_t seed = 0);

// Throws std::invalid_argument on an empty word.
std::string PerturbWord(std::string_view word, PerturbationKind kind,
                        const PerturbationConfig& config);
// As above with an explicit RNG stream (e.g. the word position).
std::string PerturbWord(std::string_view word, PerturbationKind kind,
                        const PerturbationConfig& config, std::uint64_t stream);

// Fixed kind, or a kind drawn uniformly per word from `pool`.
struct KindPolicy {
  std::optional<PerturbationKind> fixed;
  std::vector<PerturbationKind> pool{kAllPerturbationKinds.begin(), kAllPerturbationKinds.end()};

  static KindPolicy Fixed(PerturbationKind kind) { return KindPolicy{kind, {}}; }
  static KindPolicy UniformRandom() { return KindPolicy{}; }
};

// Attacks every whitespace-delimited word longer than two code points.
// Shorter words and all whitespace are copied verbatim.
std::string PerturbDocument(std::string_view text, const PerturbationConfig& config,
                            const KindPolicy& policy);

// splitmix64-mixed generator for (seed, stream).
std::mt19937_64 MakeRng(std::uint64_t seed, std::uint64_t stream);

}  // namespace cw2v

#endif  // CW2V_PERTURB_H_
