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

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <unordered_map>

#include "surprisal/error.hpp"
#include "surprisal/ingest.hpp"

namespace surprisal::ingest {

namespace {

std::string without_code_spans(std::string_view text) {
  std::string out;
  bool in_code = false;
  for (char c : text) {
    if (c == '`') {
      in_code = !in_code;
      out.push_back(' ');
    } else if (!in_code) {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

bool title_looks_english(std::string_view title) {
  const std::string text = without_code_spans(title);
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto len = static_cast<std::int32_t>(text.size());
  std::size_t letters = 0;
  std::size_t ascii = 0;
  for (std::int32_t i = 0; i < len;) {
    UChar32 c = 0;
    U8_NEXT(bytes, i, len, c);
    if (c < 0 || !u_isalpha(c)) continue;
    ++letters;
    if (c < 0x80) ++ascii;
  }
  return letters > 0 && 2 * ascii > letters;
}

bool looks_english(std::span<const std::string> titles, double threshold) {
  if (titles.empty()) return false;
  std::size_t english = 0;
  for (const auto& t : titles) english += title_looks_english(t) ? 1 : 0;
  return static_cast<double>(english) >= threshold * static_cast<double>(titles.size());
}

std::vector<RepositorySnapshot> filter_repositories(std::span<const RepositorySnapshot> repos,
                                                    std::int64_t min_issues, bool english_only,
                                                    const TitleSampler& sampler) {
  if (min_issues < 0) fail(ErrorCode::invalid_argument, "min_issues must be non-negative");
  if (english_only && !sampler) {
    fail(ErrorCode::invalid_argument, "english_only filtering needs a title sampler");
  }
  std::vector<RepositorySnapshot> out;
  for (const auto& r : repos) {
    if (r.issue_count < min_issues) continue;
    if (english_only && !looks_english(sampler(r))) continue;
    out.push_back(r);
  }
  return out;
}

TitleSampler titles_from(const Dataset& dataset, std::size_t max_titles) {
  auto by_repo = std::make_shared<std::unordered_map<std::string, std::vector<std::string>>>();
  for (const auto& i : dataset.issues) {
    auto& titles = (*by_repo)[i.repo];
    if (titles.size() < max_titles) titles.push_back(i.title);
  }
  return [by_repo](const RepositorySnapshot& r) {
    auto it = by_repo->find(r.full_name);
    return it == by_repo->end() ? std::vector<std::string>{} : it->second;
  };
}

}  // namespace surprisal::ingest
