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

#ifndef SURPRISAL_RECORDS_HPP
#define SURPRISAL_RECORDS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "surprisal/timestamp.hpp"

namespace surprisal {

enum class IssueKind { issue, pull_request };
enum class IssueState { open, closed, merged };

std::string_view to_string(IssueKind kind);
std::string_view to_string(IssueState state);
std::optional<IssueKind> parse_issue_kind(std::string_view text);
std::optional<IssueState> parse_issue_state(std::string_view text);

/// Identifies one tracker item: "owner/name#number".
struct IssueKey {
  std::string repo;
  std::int64_t number = 0;

  std::string str() const { return repo + "#" + std::to_string(number); }
  static std::optional<IssueKey> parse(std::string_view text);

  friend auto operator<=>(const IssueKey&, const IssueKey&) = default;
};

struct RepositorySnapshot {
  std::string full_name;
  std::int64_t stars = 0;
  // Combined issue + pull request count (the tracker numbers both together).
  std::int64_t issue_count = 0;
  std::optional<std::string> primary_language_hint;
  Timestamp fetched_at;

  bool operator==(const RepositorySnapshot&) const = default;
};

/// Checks the "owner/name" shape: exactly one '/', both sides non-empty.
bool valid_full_name(std::string_view full_name);

struct EventRecord {
  std::string event_type;
  std::string actor;
  Timestamp at;

  bool operator==(const EventRecord&) const = default;
};

struct Assignment {
  std::string contributor;
  Timestamp assigned_at;

  bool operator==(const Assignment&) const = default;
};

struct IssueRecord {
  std::string repo;
  std::int64_t number = 0;
  IssueKind kind = IssueKind::issue;
  std::string title;
  std::string body;
  std::string author;
  Timestamp created_at;
  IssueState state = IssueState::open;
  std::vector<EventRecord> events;  // ascending by `at`
  std::vector<std::string> labels;
  std::map<std::string, std::int64_t> reactions;
  std::vector<Assignment> assignee_history;
  // Set when some event pages could not be fetched after retries.
  bool partial_data = false;

  IssueKey key() const { return {repo, number}; }
  bool operator==(const IssueRecord&) const = default;
};

struct ReleaseRecord {
  std::string repo;
  std::string tag;
  Timestamp published_at;
  std::string body;

  bool operator==(const ReleaseRecord&) const = default;
};

struct Dataset {
  std::vector<RepositorySnapshot> repositories;
  std::vector<IssueRecord> issues;
  std::vector<ReleaseRecord> releases;
  std::optional<Timestamp> analysis_time;
  std::string tool_version;

  bool operator==(const Dataset&) const = default;
};

}  // namespace surprisal

#endif  // SURPRISAL_RECORDS_HPP
