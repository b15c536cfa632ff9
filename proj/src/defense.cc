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

#include "cw2v/defense.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cw2v/unicode.h"

namespace cw2v {
namespace {

std::string_view Trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::u32string ParseHexSequence(std::string_view field, const std::string& origin,
                                std::size_t line) {
  std::u32string out;
  std::size_t i = 0;
  while (i < field.size()) {
    while (i < field.size() && (field[i] == ' ' || field[i] == '\t')) ++i;
    if (i >= field.size()) break;
    std::size_t j = i;
    while (j < field.size() && field[j] != ' ' && field[j] != '\t') ++j;
    const std::string_view token = field.substr(i, j - i);
    uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value, 16);
    if (ec != std::errc() || ptr != token.data() + token.size() || value > 0x10FFFF ||
        (value >= 0xD800 && value <= 0xDFFF)) {
      throw ParseError(origin, line, "malformed code point '" + std::string(token) + "'");
    }
    out.push_back(static_cast<char32_t>(value));
    i = j;
  }
  if (out.empty()) throw ParseError(origin, line, "empty code point field");
  return out;
}

std::string Describe(const ConfusableEntry& e) {
  return "'" + ToUtf8(e.source) + "' -> '" + ToUtf8(e.target) + "'";
}

bool IsAsciiAlnum(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

}  // namespace

ParseError::ParseError(const std::string& origin, std::size_t line, const std::string& what)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " + what), line_(line) {}

ValidationError::ValidationError(const std::string& what, std::vector<std::string> offenders)
    : std::runtime_error([&] {
        std::string msg = what;
        for (const auto& o : offenders) msg += "\n  " + o;
        return msg;
      }()),
      offenders_(std::move(offenders)) {}

std::vector<ConfusableEntry> ParseConfusables(std::istream& in, const std::string& origin) {
  std::vector<ConfusableEntry> entries;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto semi = line.find(';', start);
      fields.push_back(Trim(line.substr(start, semi - start)));
      if (semi == std::string_view::npos) break;
      start = semi + 1;
    }
    if (fields.size() < 2) {
      throw ParseError(origin, line_no, "expected 'source ; target [; type]'");
    }
    ConfusableEntry entry;
    entry.source = ParseHexSequence(fields[0], origin, line_no);
    entry.target = ParseHexSequence(fields[1], origin, line_no);
    if (fields.size() >= 3) entry.type = std::string(fields[2]);
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ConfusableEntry> FilterForRole(std::vector<ConfusableEntry> entries,
                                           ConfusablesRole role) {
  if (role == ConfusablesRole::kSupplement) return entries;
  std::erase_if(entries, [](const ConfusableEntry& e) {
    const bool non_ascii_source =
        std::any_of(e.source.begin(), e.source.end(), [](char32_t c) { return c > 0x7F; });
    const bool ascii_target = std::all_of(e.target.begin(), e.target.end(), IsAsciiAlnum);
    return !(non_ascii_source && ascii_target);
  });
  return entries;
}

ConfusablesMap::ConfusablesMap(std::vector<ConfusableEntry> entries) {
  std::vector<std::string> offenders;
  std::map<std::u32string, std::size_t> seen;
  for (auto& e : entries) {
    if (e.source.empty() || e.target.empty()) {
      offenders.push_back("empty field: " + Describe(e));
      continue;
    }
    if (e.source == e.target) {
      offenders.push_back("source equals target: " + Describe(e));
      continue;
    }
    if (const auto it = seen.find(e.source); it != seen.end()) {
      if (entries_[it->second].target != e.target) {
        offenders.push_back("conflicting duplicate: " + Describe(e) + " vs " +
                            Describe(entries_[it->second]));
      }
      continue;
    }
    seen.emplace(e.source, entries_.size());
    entries_.push_back(std::move(e));
  }

  std::unordered_set<char32_t> target_chars;
  for (const auto& e : entries_) target_chars.insert(e.target.begin(), e.target.end());
  for (const auto& e : entries_) {
    const bool overlaps = std::any_of(e.source.begin(), e.source.end(),
                                      [&](char32_t c) { return target_chars.contains(c); });
    if (overlaps) offenders.push_back("source shares a character with a target: " + Describe(e));
  }
  if (!offenders.empty()) {
    throw ValidationError("invalid confusables map", std::move(offenders));
  }

  for (std::size_t i = 0; i < entries_.size(); ++i) {
    by_first_[entries_[i].source.front()].push_back(i);
  }
  for (auto& [first, ids] : by_first_) {
    std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
      return entries_[a].source.size() > entries_[b].source.size();
    });
  }
}

std::optional<ConfusablesMap::Match> ConfusablesMap::LongestMatch(std::u32string_view text,
                                                                  std::size_t pos) const {
  if (pos >= text.size()) return std::nullopt;
  const auto it = by_first_.find(text[pos]);
  if (it == by_first_.end()) return std::nullopt;
  const std::u32string_view rest = text.substr(pos);
  for (std::size_t id : it->second) {
    const auto& e = entries_[id];
    if (rest.starts_with(e.source)) return Match{e.source.size(), &e.target};
  }
  return std::nullopt;
}

ConfusablesMap LoadConfusables(
    const std::vector<std::pair<std::filesystem::path, ConfusablesRole>>& files) {
  std::vector<ConfusableEntry> all;
  for (const auto& [path, role] : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open confusables file: " + path.string());
    auto entries = FilterForRole(ParseConfusables(in, path.string()), role);
    all.insert(all.end(), std::make_move_iterator(entries.begin()),
               std::make_move_iterator(entries.end()));
  }
  return ConfusablesMap(std::move(all));
}

ConfusablesMap LoadConfusables(const std::filesystem::path& unicode_table,
                               const std::vector<std::filesystem::path>& supplements) {
  std::vector<std::pair<std::filesystem::path, ConfusablesRole>> files;
  files.emplace_back(unicode_table, ConfusablesRole::kUnicodeTable);
  for (const auto& s : supplements) files.emplace_back(s, ConfusablesRole::kSupplement);
  return LoadConfusables(files);
}

std::optional<std::u32string> StripAlternatingSeparator(std::u32string_view word) {
  const std::size_t n = word.size();
  if (n < 3) return std::nullopt;
  const std::size_t non_alnum =
      static_cast<std::size_t>(std::count_if(word.begin(), word.end(), [](char32_t c) {
        return !IsAlnum(c);
      }));
  if (non_alnum < n / 2) return std::nullopt;

  // Odd positions first: "t-e-x-t" matches there, ".t.e.x.t" only on even.
  for (const std::size_t parity : {std::size_t{1}, std::size_t{0}}) {
    const char32_t sep = word[parity];
    if (IsAlnum(sep)) continue;
    std::size_t occurrences = 0;
    bool pattern = true;
    std::u32string kept;
    for (std::size_t i = 0; i < n && pattern; ++i) {
      if (i % 2 == parity) {
        pattern = word[i] == sep;
        ++occurrences;
      } else {
        pattern = IsAlnum(word[i]);
        kept.push_back(word[i]);
      }
    }
    if (pattern && occurrences >= 2 && !kept.empty()) return kept;
  }
  return std::nullopt;
}

std::string Acd(std::string_view text) {
  std::u32string chars = ToU32(text);
  std::erase_if(chars, IsZeroWidth);

  // Segment into alternating whitespace / word runs.
  struct Segment {
    std::u32string text;
    bool space;
  };
  std::vector<Segment> segments;
  for (char32_t c : chars) {
    const bool space = IsSpace(c);
    if (segments.empty() || segments.back().space != space) segments.push_back({{}, space});
    segments.back().text.push_back(c);
  }

  std::u32string out;
  out.reserve(chars.size());
  auto emit_word = [&out](const std::u32string& word) {
    if (auto stripped = StripAlternatingSeparator(word)) {
      out += *stripped;
    } else {
      out += word;
    }
  };

  std::size_t i = 0;
  while (i < segments.size()) {
    const Segment& seg = segments[i];
    if (seg.space) {
      out += seg.text;
      ++i;
      continue;
    }
    // Segments alternate, so the next word run (if any) sits at j + 2.
    std::size_t j = i;
    std::size_t fragments = 0;
    if (seg.text.size() == 1) {
      fragments = 1;
      while (j + 2 < segments.size() && segments[j + 2].text.size() == 1) {
        j += 2;
        ++fragments;
      }
    }
    if (fragments >= 3) {
      std::u32string joined;
      for (std::size_t k = i; k <= j; k += 2) joined += segments[k].text;
      emit_word(joined);
      i = j + 1;
    } else {
      emit_word(seg.text);
      ++i;
    }
  }
  return ToUtf8(out);
}

std::string UnicodeCanonicalize(std::string_view text, const ConfusablesMap& map) {
  const std::u32string chars = ToU32(text);
  std::u32string out;
  out.reserve(chars.size());
  std::size_t pos = 0;
  while (pos < chars.size()) {
    if (const auto m = map.LongestMatch(chars, pos)) {
      out += *m->target;
      pos += m->length;
    } else {
      out.push_back(chars[pos++]);
    }
  }
  return ToUtf8(out);
}

std::string Deobfuscate(std::string_view text, const DefenseOptions& options,
                        const ConfusablesMap* map) {
  std::string out(text);
  if (options.acd) out = Acd(out);
  if (options.uc) {
    if (map == nullptr) throw std::invalid_argument("Deobfuscate: UC enabled without a map");
    out = UnicodeCanonicalize(out, *map);
  }
  return out;
}

}  // namespace cw2v
