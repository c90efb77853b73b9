// Copyright 2026 The mpgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MPGATE_CSV_HPP_
#define MPGATE_CSV_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mpgate::csv {

/// One non-blank line of a CSV document, split on commas with surrounding
/// whitespace trimmed. `line` is 1-based for diagnostics.
struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Splits `text` into records. Blank lines are skipped and CR before LF is
/// ignored. No quoting is supported: none of the formats need it.
std::vector<Record> parse(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Parses a finite double; throws kParse naming `where` on failure.
double parse_double(std::string_view field, std::string_view where);
long long parse_integer(std::string_view field, std::string_view where);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);
/// Fixed-point representation with `digits` decimals.
std::string format_fixed(double value, int digits);

/// Names in every CSV format are restricted to [A-Za-z0-9_+-].
bool is_valid_name(std::string_view name);

}  // namespace mpgate::csv

#endif  // MPGATE_CSV_HPP_
