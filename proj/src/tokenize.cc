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

#include "cw2v/tokenize.h"

#include "cw2v/unicode.h"

namespace cw2v {

TokenizedDoc Tokenize(std::string_view text, std::string source_id) {
  TokenizedDoc doc;
  doc.source_id = std::move(source_id);
  std::u32string current;
  for (char32_t c : ToU32(text)) {
    const char32_t lower = ToLower(c);
    if (IsAlnum(lower)) {
      current.push_back(lower);
    } else if (!current.empty()) {
      doc.tokens.push_back(ToUtf8(current));
      current.clear();
    }
  }
  if (!current.empty()) doc.tokens.push_back(ToUtf8(current));
  return doc;
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  std::u32string current;
  for (char32_t c : ToU32(text)) {
    if (IsSpace(c)) {
      if (!current.empty()) out.push_back(ToUtf8(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(ToUtf8(current));
  return out;
}

}  // namespace cw2v
