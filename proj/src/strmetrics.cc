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

#include "cw2v/strmetrics.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cw2v/unicode.h"

namespace cw2v {

std::size_t Levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  // Strip the common prefix and suffix; they never contribute edits.
  while (!a.empty() && a.front() == b.front()) {
    a.remove_prefix(1);
    b.remove_prefix(1);
  }
  while (!a.empty() && a.back() == b.back()) {
    a.remove_suffix(1);
    b.remove_suffix(1);
  }
  if (a.empty()) return b.size();

  thread_local std::vector<std::size_t> row;
  row.resize(a.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t j = 1; j <= b.size(); ++j) {
    std::size_t diag = row[0];
    row[0] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      const std::size_t up = row[i];
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[i] = std::min({up + 1, row[i - 1] + 1, sub});
      diag = up;
    }
  }
  return row[a.size()];
}

std::size_t Levenshtein(std::string_view a, std::string_view b) {
  return Levenshtein(ToU32(a), ToU32(b));
}

double NormDistance(std::u32string_view a, std::u32string_view b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("NormDistance: empty word");
  }
  return static_cast<double>(Levenshtein(a, b)) /
         static_cast<double>(std::min(a.size(), b.size()));
}

double NormDistance(std::string_view a, std::string_view b) {
  return NormDistance(ToU32(a), ToU32(b));
}

double StrSim(std::u32string_view a, std::u32string_view b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("StrSim: empty word");
  }
  const double shorter = static_cast<double>(std::min(a.size(), b.size()));
  if (a == b) return 2.0 * shorter;
  return shorter / static_cast<double>(Levenshtein(a, b));
}

double StrSim(std::string_view a, std::string_view b) {
  return StrSim(ToU32(a), ToU32(b));
}

std::u32string BagOfChars(std::u32string_view word) {
  std::u32string bag(word);
  std::sort(bag.begin(), bag.end());
  return bag;
}

std::string BagOfChars(std::string_view word) {
  return ToUtf8(BagOfChars(ToU32(word)));
}

std::u32string CharSet(std::u32string_view word) {
  std::u32string set = BagOfChars(word);
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

}  // namespace cw2v
