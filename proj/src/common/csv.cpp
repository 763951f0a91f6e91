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

#include "surprisal/csv.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "surprisal/error.hpp"

namespace surprisal::csv {

std::optional<std::vector<std::string>> read_row(std::istream& in, std::size_t& line_no) {
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  ++line_no;
  const std::size_t start_line = line_no;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i >= line.size()) {
      if (!quoted) break;
      // Quoted field continues on the next physical line.
      if (!std::getline(in, line)) {
        fail(ErrorCode::schema, "unterminated quoted field starting on line " + std::to_string(start_line));
      }
      ++line_no;
      field.push_back('\n');
      i = 0;
      continue;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // CRLF line ending
    } else {
      field.push_back(c);
    }
    ++i;
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

Table read_table(std::istream& in, std::span<const std::string_view> expected, std::string_view what) {
  Table t;
  std::size_t line_no = 0;
  auto header = read_row(in, line_no);
  if (!header) fail(ErrorCode::schema, std::string(what) + ": empty file");
  for (auto& h : *header) {
    h.erase(0, h.find_first_not_of(" \t\xEF\xBB\xBF"));  // stray BOM / spaces
    h.erase(h.find_last_not_of(" \t") + 1);
  }
  std::vector<std::size_t> index;
  for (auto name : expected) {
    auto it = std::find(header->begin(), header->end(), name);
    if (it == header->end()) {
      fail(ErrorCode::schema, std::string(what) + ":1: missing column '" + std::string(name) + "'");
    }
    index.push_back(static_cast<std::size_t>(it - header->begin()));
  }
  t.header.assign(expected.begin(), expected.end());
  while (true) {
    const std::size_t start = line_no + 1;
    auto row = read_row(in, line_no);
    if (!row) break;
    if (row->size() == 1 && row->front().empty()) continue;  // blank line
    if (row->size() != header->size()) {
      fail(ErrorCode::schema, std::string(what) + ":" + std::to_string(start) + ": expected " +
                                  std::to_string(header->size()) + " fields, found " +
                                  std::to_string(row->size()));
    }
    std::vector<std::string> picked;
    picked.reserve(index.size());
    for (std::size_t j : index) picked.push_back(std::move((*row)[j]));
    t.rows.push_back(std::move(picked));
    t.lines.push_back(start);
  }
  return t;
}

}  // namespace surprisal::csv
