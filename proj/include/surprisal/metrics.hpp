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

#ifndef SURPRISAL_METRICS_HPP
#define SURPRISAL_METRICS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surprisal/records.hpp"

namespace surprisal::metrics {

enum class Importance { low, regular, high };
enum class Verdict { low, regular, high, unrelated };

std::string_view to_string(Importance i);
std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view text);

struct IssueMetrics {
  IssueKey source;
  IssueKind kind = IssueKind::issue;
  Timestamp created_at;
  std::int64_t reopenings = 0;
  std::int64_t participants = 0;
  std::int64_t interactions = 0;
  std::int64_t open_state_duration = 0;  // seconds
  std::int64_t release_mentions = 0;
  std::optional<std::int64_t> order_of_address;
  std::int64_t reactions = 0;
  std::optional<Importance> importance;
  bool clock_skew = false;  // a closing event predated creation; duration clamped to 0

  bool operator==(const IssueMetrics&) const = default;
};

struct LabelClassification {
  std::string raw_label;
  Verdict verdict = Verdict::unrelated;
  bool operator==(const LabelClassification&) const = default;
};

/// Keys are lowercased labels.
using LabelMap = std::map<std::string, Verdict>;

std::int64_t count_reopenings(const IssueRecord& issue);
/// Distinct event actors plus the author.
std::int64_t count_participants(const IssueRecord& issue);
std::int64_t count_interactions(const IssueRecord& issue);
std::int64_t count_reactions(const IssueRecord& issue);

struct OpenDuration {
  std::int64_t seconds = 0;
  bool clock_skew = false;
};

/// Open issues (and closed ones without a closing event) run to
/// analysis_time; otherwise to the last closed/merged event.
OpenDuration open_state_duration(const IssueRecord& issue, Timestamp analysis_time);

/// Occurrences of "#<number>" not followed by another digit.
std::int64_t count_mentions(std::string_view text, std::int64_t number);
std::int64_t release_mentions(std::span<const ReleaseRecord> releases, std::int64_t number);

struct Resolution {
  IssueKey issue;
  Timestamp assigned_at;
  Timestamp resolved_at;
};

inline constexpr std::size_t kMinResolutions = 5;

/// Linear interpolation between order statistics (q in [0, 1]).
double percentile_linear(std::vector<double> values, double q);

/// Ordinals for one contributor's resolutions. Gaps between successive
/// resolutions above their 75th percentile open a new band; issues in a band
/// are numbered 1.. by oldest assignment. Issues before the first such gap get
/// nothing, and so does everyone with fewer than kMinResolutions.
std::map<IssueKey, std::int64_t> order_of_address(std::span<const Resolution> resolutions);

/// Resolutions per (repository, contributor) from assignee histories: the
/// final closed/merged event of each assigned issue, with the contributor's
/// earliest assignment. An issue resolved under several assignees keeps its
/// smallest ordinal.
std::map<IssueKey, std::int64_t> order_of_address(const Dataset& dataset);

/// Highest non-unrelated verdict among the labels, looked up
/// case-insensitively.
std::optional<Importance> normalize_labels(std::span<const std::string> labels,
                                           const LabelMap& classification);

/// Draft classification: "P<k>" ranks split into three bins (ties go up),
/// priority words (low/medium/high, critical, ...) mapped directly, anything
/// else unrelated. Sorted by label.
std::vector<LabelClassification> suggest_label_map(const std::set<std::string>& labels);

/// CSV with header "raw_label,verdict".
LabelMap read_label_map(std::istream& in);
LabelMap load_label_map(const std::filesystem::path& path);
void write_label_map(std::ostream& out, std::span<const LabelClassification> rows);

std::vector<IssueMetrics> compute_all_metrics(const Dataset& dataset, const LabelMap& labels,
                                              Timestamp analysis_time);

void write_metrics_csv(std::ostream& out, std::span<const IssueMetrics> rows);
std::vector<IssueMetrics> read_metrics_csv(std::istream& in);

}  // namespace surprisal::metrics

#endif  // SURPRISAL_METRICS_HPP
