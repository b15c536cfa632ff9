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

#ifndef CW2V_TOKENIZE_H_
#define CW2V_TOKENIZE_H_

#include <string>
#include <string_view>
#include <vector>

namespace cw2v {

struct TokenizedDoc {
  std::vector<std::string> tokens;
  std::string source_id;
};

// Lowercases, then emits maximal runs of letters and decimal digits. Every
// other character (punctuation, emoji, whitespace, zero-width marks) is a
// boundary and is dropped.
TokenizedDoc Tokenize(std::string_view text, std::string source_id = {});

// Splits on Unicode whitespace without any other processing.
std::vector<std::string> SplitWhitespace(std::string_view text);

}  // namespace cw2v

#endif  // CW2V_TOKENIZE_H_
