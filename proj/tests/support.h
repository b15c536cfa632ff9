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


// Shared helpers for the test suites: hand-rolled generators, an
// independent edit-distance oracle and access to the shipped data tables.

#ifndef CW2V_TESTS_SUPPORT_H_
#define CW2V_TESTS_SUPPORT_H_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cw2v/defense.h"
#include "cw2v/perturb.h"
#include "cw2v/random.h"

namespace cw2v::testing {

inline std::filesystem::path DataDir() { return CW2V_TEST_DATA_DIR; }

inline const ConfusablesMap& ShippedConfusables() {
  static const ConfusablesMap map = [] {
    const auto dir = DataDir();
    return LoadConfusables(std::vector<std::pair<std::filesystem::path, ConfusablesRole>>{
        {dir / "confusables.txt", ConfusablesRole::kUnicodeTable},
        {dir / "latin_diacritics.txt", ConfusablesRole::kSupplement},
        {dir / "tandem.txt", ConfusablesRole::kSupplement},
    });
  }();
  return map;
}

inline constexpr std::string_view kLower = "abcdefghijklmnopqrstuvwxyz";
inline constexpr std::string_view kAlnum =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

// Word of length [min_len, max_len] over `alphabet`.
inline std::string RandomWord(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len,
                              std::string_view alphabet = kLower) {
  const std::size_t len = min_len + UniformIndex(rng, max_len - min_len + 1);
  std::string word;
  for (std::size_t i = 0; i < len; ++i) word.push_back(alphabet[UniformIndex(rng, alphabet.size())]);
  return word;
}

// Word mixing ASCII with a few multi-byte letters.
inline std::string RandomUnicodeWord(std::mt19937_64& rng, std::size_t min_len,
                                     std::size_t max_len) {
  static const std::vector<std::string> kExtra = {"é", "ß", "ø", "ж", "λ", "ü", "ı"};
  const std::size_t len = min_len + UniformIndex(rng, max_len - min_len + 1);
  std::string word;
  for (std::size_t i = 0; i < len; ++i) {
    if (Bernoulli(rng, 0.2)) {
      word += kExtra[UniformIndex(rng, kExtra.size())];
    } else {
      word.push_back(kLower[UniformIndex(rng, kLower.size())]);
    }
  }
  return word;
}

// Space-separated document mixing words, punctuation and short tokens.
inline std::string RandomDocument(std::mt19937_64& rng, std::size_t max_words) {
  static const std::vector<std::string> kNoise = {"e.g", "a", "I", "ok", "t-e-x-t", "!!",
                                                  "l i k e", "wait...", "x_y", "Ünïcödé",
                                                  "s\u200bh\u200ba\u200br\u200be", "/\\",
                                                  "|-|"};
  const std::size_t words = 1 + UniformIndex(rng, max_words);
  std::string doc;
  for (std::size_t i = 0; i < words; ++i) {
    if (i > 0) doc += Bernoulli(rng, 0.1) ? "  " : " ";
    if (Bernoulli(rng, 0.3)) {
      doc += kNoise[UniformIndex(rng, kNoise.size())];
    } else {
      doc += RandomWord(rng, 1, 9, kAlnum);
    }
  }
  return doc;
}

// Full-matrix Wagner-Fischer distance, written independently of the
// library's two-row version.
inline std::size_t OracleLevenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[a.size()][b.size()];
}

}  // namespace cw2v::testing

#endif  // CW2V_TESTS_SUPPORT_H_
