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

// String metrics over Unicode scalar values: Levenshtein distance, the
// length-normalized distance used for index clustering, the reciprocal
// similarity that builds spelling vectors, and bag-of-characters keys.
//
// Each function has a UTF-8 overload and a code point overload. Callers that
// evaluate many pairs (spelling vectors, distance matrices) should decode
// once and use the `std::u32string_view` forms.

#ifndef CW2V_STRMETRICS_H_
#define CW2V_STRMETRICS_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace cw2v {

// Unit-cost insert/delete/substitute distance. Two-row DP, O(min(|a|,|b|))
// memory.
std::size_t Levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t Levenshtein(std::string_view a, std::string_view b);

// Levenshtein(a, b) / min(len(a), len(b)). Throws std::invalid_argument if
// either word is empty.
double NormDistance(std::u32string_view a, std::u32string_view b);
double NormDistance(std::string_view a, std::string_view b);

// 2 * min(len) when a == b, otherwise min(len) / Levenshtein(a, b).
// Throws std::invalid_argument if either word is empty.
double StrSim(std::u32string_view a, std::u32string_view b);
double StrSim(std::string_view a, std::string_view b);

// Character multiset in canonical form: the code points sorted ascending.
std::u32string BagOfChars(std::u32string_view word);
std::string BagOfChars(std::string_view word);

// Distinct characters, sorted. Multiplicity is dropped, so "pleease" and
// "please" share a key.
std::u32string CharSet(std::u32string_view word);

}  // namespace cw2v

#endif  // CW2V_STRMETRICS_H_
