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

// UTF-8 <-> code point conversion and the handful of character-class
// queries the rest of the library needs. Everything operates on Unicode
// scalar values; grapheme clusters are never formed.

#ifndef CW2V_UNICODE_H_
#define CW2V_UNICODE_H_

#include <string>
#include <string_view>

namespace cw2v {

// Malformed UTF-8 sequences decode to U+FFFD.
std::u32string ToU32(std::string_view utf8);
std::string ToUtf8(std::u32string_view text);
std::string ToUtf8(char32_t c);

// Number of code points in a UTF-8 string.
std::size_t CodePointLength(std::string_view utf8);

// Letter (general category L*) or decimal digit (Nd).
bool IsAlnum(char32_t c);
// Unicode White_Space property.
bool IsSpace(char32_t c);
bool IsUpper(char32_t c);
char32_t ToLower(char32_t c);
char32_t ToUpper(char32_t c);

// U+200B, U+200C, U+200D, U+FEFF.
bool IsZeroWidth(char32_t c);

inline constexpr char32_t kZeroWidthNonJoiner = U'\u200C';

}  // namespace cw2v

#endif  // CW2V_UNICODE_H_
