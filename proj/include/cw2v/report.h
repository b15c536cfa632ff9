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

#ifndef CW2V_REPORT_H_
#define CW2V_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cw2v {

std::uint64_t Fnv1a64(std::string_view data, std::uint64_t hash = 0xcbf29ce484222325ULL);
// 16 lowercase hex digits.
std::string HexDigest(std::uint64_t value);

// 17 significant digits, which round-trips any double exactly. Throws on
// non-finite values.
std::string FormatDouble(double value);

// One measured quantity.
struct Report {
  std::string metric;
  double value = 0.0;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  std::string fingerprint;
};

// `metric<TAB>value<TAB>sample_size<TAB>seed<TAB>fingerprint`, with a header.
std::string ReportsToTsv(const std::vector<Report>& reports);
// {"reports": [{...}, ...]} with keys in a fixed order.
std::string ReportsToJson(const std::vector<Report>& reports);

// Writes `content` to `path` (truncating). Throws std::runtime_error.
void WriteFile(const std::filesystem::path& path, std::string_view content);
std::string ReadFile(const std::filesystem::path& path);
// One entry per line, trailing CR stripped, empty lines skipped.
std::vector<std::string> ReadLines(const std::filesystem::path& path);

}  // namespace cw2v

#endif  // CW2V_REPORT_H_
