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

// model.tsv reader/writer.
//
//   #surprisal-model	1
//   #order	3
//   #smoothing	modified_kneser_ney
//   #config_fingerprint	0123456789abcdef
//   #discounts	1	0.5	1	1.5        (one line per level)
//   1	cat	5	3                      level, tokens..., count, continuation
//   2	<s>	cat	2	1
//
// N-gram lines are sorted by level, then token-wise byte order.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "surprisal/error.hpp"
#include "surprisal/lm.hpp"

namespace surprisal::lm {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_hex(std::string_view s, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, 16);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_real(std::string_view s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(std::string(s), &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::schema, "model.tsv line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

void KneserNeyModel::write(std::ostream& out) const {
  const Vocabulary& vocab = counts_.vocabulary();
  out << "#surprisal-model\t1\n";
  out << "#order\t" << order() << '\n';
  out << "#smoothing\t" << to_string(smoothing_) << '\n';
  char fp[32];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(fingerprint_));
  out << "#config_fingerprint\t" << fp << '\n';
  for (int k = 1; k <= order(); ++k) {
    const Discounts& d = discounts_[k - 1];
    out << "#discounts\t" << k << '\t' << format_double(d.d1) << '\t' << format_double(d.d2)
        << '\t' << format_double(d.d3plus) << '\n';
  }

  struct Row {
    std::vector<std::string> tokens;
    NGramEntry entry;
  };
  for (int k = 1; k <= order(); ++k) {
    std::vector<Row> rows;
    rows.reserve(counts_.level(k).size());
    for (const auto& [gram, entry] : counts_.level(k)) {
      Row r;
      for (TokenId id : gram) r.tokens.push_back(vocab.token(id));
      r.entry = entry;
      rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.tokens < b.tokens; });
    for (const auto& r : rows) {
      out << k;
      for (const auto& t : r.tokens) out << '\t' << t;
      out << '\t' << r.entry.count << '\t' << r.entry.continuation << '\n';
    }
  }
}

KneserNeyModel KneserNeyModel::read(std::istream& in) {
  int order = 0;
  Smoothing smoothing = Smoothing::modified_kneser_ney;
  std::uint64_t fingerprint = 0;
  std::vector<Discounts> discounts;
  Vocabulary vocab;
  std::vector<std::unordered_map<NGramKey, NGramEntry>> levels;

  std::string line;
  std::size_t line_no = 0;
  bool saw_magic = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (line[0] == '#') {
      const auto key = fields[0];
      if (key == "#surprisal-model") {
        saw_magic = true;
      } else if (key == "#order") {
        if (fields.size() != 2 || !parse_number(fields[1], order) || order < kMinOrder ||
            order > kMaxOrder) {
          bad_line(line_no, "invalid order");
        }
        discounts.assign(static_cast<std::size_t>(order), kFallbackDiscounts);
        levels.assign(static_cast<std::size_t>(order), {});
      } else if (key == "#smoothing") {
        auto s = fields.size() == 2 ? parse_smoothing(fields[1]) : std::nullopt;
        if (!s) bad_line(line_no, "invalid smoothing");
        smoothing = *s;
      } else if (key == "#config_fingerprint") {
        if (fields.size() != 2 || !parse_hex(fields[1], fingerprint)) {
          bad_line(line_no, "invalid fingerprint");
        }
      } else if (key == "#discounts") {
        int k = 0;
        Discounts d;
        if (order == 0 || fields.size() != 5 || !parse_number(fields[1], k) || k < 1 ||
            k > order || !parse_real(fields[2], d.d1) || !parse_real(fields[3], d.d2) ||
            !parse_real(fields[4], d.d3plus)) {
          bad_line(line_no, "invalid discounts");
        }
        discounts[k - 1] = d;
      }
      continue;
    }
    if (!saw_magic || order == 0) bad_line(line_no, "n-gram before header");
    int k = 0;
    if (!parse_number(fields[0], k) || k < 1 || k > order ||
        fields.size() != static_cast<std::size_t>(k) + 3) {
      bad_line(line_no, "malformed n-gram row");
    }
    NGramKey gram;
    for (int i = 1; i <= k; ++i) {
      if (fields[i].empty()) bad_line(line_no, "empty token");
      gram.push_back(fields[i] == kBeginMarker ? kBeginId : vocab.intern(fields[i]));
    }
    NGramEntry e;
    if (!parse_number(fields[k + 1], e.count) || !parse_number(fields[k + 2], e.continuation)) {
      bad_line(line_no, "malformed counts");
    }
    levels[k - 1][gram] = e;
  }
  if (!saw_magic || order == 0) fail(ErrorCode::schema, "model.tsv: missing header");
  NGramCounts counts = NGramCounts::from_entries(order, std::move(vocab), std::move(levels));
  if (counts.vocabulary().size() == 0) fail(ErrorCode::schema, "model.tsv: empty vocabulary");
  return KneserNeyModel(std::move(counts), smoothing, std::move(discounts), fingerprint);
}

void KneserNeyModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  write(out);
  if (!out) fail(ErrorCode::io, "failed writing " + path.string());
}

KneserNeyModel KneserNeyModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  return read(in);
}

}  // namespace surprisal::lm
