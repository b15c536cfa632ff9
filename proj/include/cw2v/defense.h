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

// Rule-based deobfuscation.
//
//  * Acd() undoes separator insertion: zero-width marks, spaced-out letters
//    ("l i k e") and a repeated punctuation character between letters
//    ("t-e-x-t").
//  * UnicodeCanonicalize() rewrites look-alike characters and multi-character
//    look-alike sequences ("/\" for "A") using a ConfusablesMap.
//
// Maps load from files in the layout of Unicode's confusables.txt:
//
//   0131 ;  0069 ;  MA  # ( ı → i ) LATIN SMALL LETTER DOTLESS I ...
//
// Fields are hex code point sequences separated by ';'; '#' starts a comment.

#ifndef CW2V_DEFENSE_H_
#define CW2V_DEFENSE_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cw2v {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& origin, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> offenders);
  const std::vector<std::string>& offenders() const { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

struct ConfusableEntry {
  std::u32string source;
  std::u32string target;
  std::string type;  // third field of the line, e.g. "MA" or "TC"
};

// How entries from a file are admitted into the map.
enum class ConfusablesRole {
  // The published Unicode table. Only entries with a non-ASCII source and an
  // ASCII letter/digit target are kept, which folds look-alikes to ASCII and
  // leaves plain text (e.g. 'm' -> "rn", '1' -> 'l') alone.
  kUnicodeTable,
  // Local tables (tandem sequences, diacritics): every entry is kept.
  kSupplement,
};

// Parses one file's worth of lines. Throws ParseError with the 1-based line
// number on malformed hex fields or missing fields.
std::vector<ConfusableEntry> ParseConfusables(std::istream& in,
                                              const std::string& origin);

// Immutable source -> target rewrite table with longest-match lookup.
//
// Construction validates:
//  * sources and targets are non-empty and differ,
//  * a source never appears twice with different targets,
//  * no target contains a source, and no source shares a character with any
//    target. The second condition makes a single left-to-right pass
//    idempotent: replacements never create new matches.
class ConfusablesMap {
 public:
  ConfusablesMap() = default;
  explicit ConfusablesMap(std::vector<ConfusableEntry> entries);

  // Entries in insertion (file) order, duplicates removed.
  const std::vector<ConfusableEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  struct Match {
    std::size_t length;
    const std::u32string* target;
  };
  // Longest source starting at `pos`, if any.
  std::optional<Match> LongestMatch(std::u32string_view text, std::size_t pos) const;

 private:
  std::vector<ConfusableEntry> entries_;
  // First code point -> entry indices, longest source first.
  std::unordered_map<char32_t, std::vector<std::size_t>> by_first_;
};

// Loads the Unicode table plus any supplementary tables, in order.
ConfusablesMap LoadConfusables(const std::filesystem::path& unicode_table,
                               const std::vector<std::filesystem::path>& supplements = {});

// Lower-level loader for a list of (path, role) pairs.
ConfusablesMap LoadConfusables(
    const std::vector<std::pair<std::filesystem::path, ConfusablesRole>>& files);

// Keeps the entries of `entries` admitted under `role`.
std::vector<ConfusableEntry> FilterForRole(std::vector<ConfusableEntry> entries,
                                           ConfusablesRole role);

// Alternating Characters Defense.
//   0. strip U+200B, U+200C, U+200D, U+FEFF;
//   1. join maximal runs of >= 3 whitespace-separated single-character
//      fragments;
//   2. in each whitespace-delimited word of >= 3 characters where every odd
//      (else every even) position holds the same non-alphanumeric character,
//      at least twice, the other positions are all alphanumeric, and at least
//      floor(len/2) characters are non-alphanumeric: drop the separator.
std::string Acd(std::string_view text);

// Step 2 of Acd() on a single word. Returns nullopt when the word is left as
// is.
std::optional<std::u32string> StripAlternatingSeparator(std::u32string_view word);

// Single left-to-right longest-match rewrite.
std::string UnicodeCanonicalize(std::string_view text, const ConfusablesMap& map);

struct DefenseOptions {
  bool acd = true;
  bool uc = true;
};

// ACD then UC, each when enabled. `map` may be null only if uc is off.
std::string Deobfuscate(std::string_view text, const DefenseOptions& options,
                        const ConfusablesMap* map);

}  // namespace cw2v

#endif  // CW2V_DEFENSE_H_
