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

#include "surprisal/records.hpp"

#include <charconv>

namespace surprisal {

std::string_view to_string(IssueKind kind) {
  return kind == IssueKind::issue ? "issue" : "pull_request";
}

std::string_view to_string(IssueState state) {
  switch (state) {
    case IssueState::open: return "open";
    case IssueState::closed: return "closed";
    case IssueState::merged: return "merged";
  }
  return "open";
}

std::optional<IssueKind> parse_issue_kind(std::string_view text) {
  if (text == "issue") return IssueKind::issue;
  if (text == "pull_request") return IssueKind::pull_request;
  return std::nullopt;
}

std::optional<IssueState> parse_issue_state(std::string_view text) {
  if (text == "open") return IssueState::open;
  if (text == "closed") return IssueState::closed;
  if (text == "merged") return IssueState::merged;
  return std::nullopt;
}

std::optional<IssueKey> IssueKey::parse(std::string_view text) {
  const auto hash = text.rfind('#');
  if (hash == std::string_view::npos || hash == 0 || hash + 1 >= text.size()) return std::nullopt;
  IssueKey key;
  key.repo = std::string(text.substr(0, hash));
  const auto digits = text.substr(hash + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), key.number);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || key.number <= 0) {
    return std::nullopt;
  }
  return key;
}

bool valid_full_name(std::string_view full_name) {
  const auto slash = full_name.find('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 >= full_name.size()) return false;
  return full_name.find('/', slash + 1) == std::string_view::npos;
}

}  // namespace surprisal
