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

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "surprisal/error.hpp"
#include "surprisal/textprep.hpp"

namespace surprisal::textprep {

namespace {
constexpr std::string_view kFingerprintPrefix = "# fingerprint=";
}

void write_token_dump(std::ostream& out, std::span<const TokenSequence> corpus) {
  if (!corpus.empty()) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(corpus.front().config_fingerprint));
    out << kFingerprintPrefix << hex << '\n';
  }
  for (const auto& seq : corpus) {
    out << seq.source.str() << '\t' << to_string(seq.kind) << '\t';
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      if (i) out << ' ';
      out << seq.tokens[i];
    }
    out << '\n';
  }
}

std::vector<TokenSequence> read_token_dump(std::istream& in, std::string_view what) {
  std::vector<TokenSequence> out;
  std::uint64_t fingerprint = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = std::string(what) + ":" + std::to_string(line_no);
    if (line.front() == '#') {
      if (line.rfind(kFingerprintPrefix, 0) == 0) {
        fingerprint = std::stoull(line.substr(kFingerprintPrefix.size()), nullptr, 16);
      }
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) fail(ErrorCode::schema, where + ": expected key, kind and tokens separated by tabs");
    TokenSequence seq;
    const auto key = IssueKey::parse(std::string_view(line).substr(0, t1));
    const auto kind = parse_issue_kind(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    if (!key || !kind) fail(ErrorCode::schema, where + ": bad issue key or kind");
    seq.source = *key;
    seq.kind = *kind;
    seq.config_fingerprint = fingerprint;
    std::string_view rest = std::string_view(line).substr(t2 + 1);
    while (!rest.empty()) {
      const auto sp = rest.find(' ');
      const auto tok = rest.substr(0, sp);
      if (!tok.empty()) seq.tokens.emplace_back(tok);
      if (sp == std::string_view::npos) break;
      rest.remove_prefix(sp + 1);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<TokenSequence> load_token_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  return read_token_dump(in, path.filename().string());
}

}  // namespace surprisal::textprep
