// Copyright 2026 The Surprisal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SURPRISAL_CSV_HPP
#define SURPRISAL_CSV_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace surprisal::csv {

// RFC 4180 subset: comma separated, double-quote quoting, "" escapes a quote,
// quoted fields may span lines. A trailing '\r' on a line is dropped.

/// Reads the next record; nullopt at end of input. Throws SchemaError for an
/// unterminated quoted field.
std::optional<std::vector<std::string>> read_row(std::istream& in, std::size_t& line_no);

std::string quote(std::string_view field);
void write_row(std::ostream& out, std::span<const std::string> fields);

/// Header row plus records, with the header checked against `expected`
/// (in order). Errors mention `what` and the line number.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // starting line of each row
};
Table read_table(std::istream& in, std::span<const std::string_view> expected, std::string_view what);

}  // namespace surprisal::csv

#endif  // SURPRISAL_CSV_HPP
