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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "surprisal/error.hpp"
#include "surprisal/ingest.hpp"
#include "surprisal/metrics.hpp"

using namespace surprisal;
using namespace surprisal::metrics;
namespace fs = std::filesystem;

namespace {

const fs::path kRepo = fs::path(SURPRISAL_TEST_DATA) / "metrics_repo";
constexpr std::int64_t kDay = 86400;

Timestamp t0() { return *Timestamp::parse("2024-01-01T00:00:00Z"); }
Timestamp at(std::int64_t secs) { return Timestamp::from_unix(t0().unix_seconds() + secs); }

IssueRecord blank(std::string author = "a") {
  IssueRecord r;
  r.repo = "o/r";
  r.number = 12;
  r.author = std::move(author);
  r.created_at = t0();
  return r;
}

void add(IssueRecord& r, std::string type, std::string actor, std::int64_t secs) {
  r.events.push_back({std::move(type), std::move(actor), at(secs)});
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

LabelMap priority_scheme() {
  return {{"p1", Verdict::low},        {"low priority", Verdict::low}, {"p2", Verdict::regular},
          {"p3", Verdict::regular},    {"p4", Verdict::high},          {"p5", Verdict::high},
          {"high priority", Verdict::high}, {"bug", Verdict::unrelated}};
}

}  // namespace

TEST(Counts, Reopenings) {
  auto r = blank();
  EXPECT_EQ(count_reopenings(r), 0);
  add(r, "closed", "a", 10);
  add(r, "reopened", "a", 20);
  add(r, "closed", "b", 30);
  add(r, "reopened", "c", 40);
  EXPECT_EQ(count_reopenings(r), 2);

  auto mixed = blank();
  const char* types[] = {"commented", "labeled", "closed", "reopened", "assigned", "commented", "closed"};
  for (int i = 0; i < 7; ++i) add(mixed, types[i], "x", i);
  EXPECT_EQ(count_reopenings(mixed), 1);
  EXPECT_EQ(count_interactions(mixed), 7);
}

TEST(Counts, Participants) {
  auto r = blank("a");
  EXPECT_EQ(count_participants(r), 1);
  for (int i = 0; i < 5; ++i) add(r, "commented", "a", i);
  EXPECT_EQ(count_participants(r), 1);

  auto s = blank("a");
  add(s, "commented", "a", 1);
  add(s, "commented", "b", 2);
  add(s, "commented", "b", 3);
  add(s, "commented", "c", 4);
  EXPECT_EQ(count_participants(s), 3);
}

TEST(Counts, Reactions) {
  auto r = blank();
  EXPECT_EQ(count_reactions(r), 0);
  r.reactions = {{"+1", 3}, {"heart", 2}, {"eyes", 0}};
  EXPECT_EQ(count_reactions(r), 5);
}

TEST(OpenDurationTest, ClosedAndReopened) {
  auto r = blank();
  r.state = IssueState::closed;
  add(r, "closed", "a", 48 * 3600);
  EXPECT_EQ(open_state_duration(r, at(1000 * kDay)).seconds, 172800);

  auto s = blank();
  s.state = IssueState::closed;
  add(s, "closed", "a", 24 * 3600);
  add(s, "reopened", "a", 30 * 3600);
  add(s, "closed", "a", 96 * 3600);
  EXPECT_EQ(open_state_duration(s, at(1000 * kDay)).seconds, 345600);
}

TEST(OpenDurationTest, NeverClosedUsesAnalysisTime) {
  auto r = blank();
  r.state = IssueState::open;
  EXPECT_EQ(open_state_duration(r, at(10 * 3600)).seconds, 36000);
  // a stale close event on an open item does not end it
  add(r, "closed", "a", 3600);
  add(r, "reopened", "a", 7200);
  EXPECT_EQ(open_state_duration(r, at(10 * 3600)).seconds, 36000);
}

TEST(OpenDurationTest, MergedAndClockSkew) {
  auto r = blank();
  r.state = IssueState::merged;
  add(r, "merged", "a", 500);
  EXPECT_EQ(open_state_duration(r, at(kDay)).seconds, 500);

  auto s = blank();
  s.created_at = at(kDay);
  s.state = IssueState::closed;
  add(s, "closed", "a", 0);
  const auto d = open_state_duration(s, at(2 * kDay));
  EXPECT_EQ(d.seconds, 0);
  EXPECT_TRUE(d.clock_skew);
}

TEST(Mentions, Boundaries) {
  EXPECT_EQ(count_mentions("Fixes #12, #12 again", 12), 2);
  EXPECT_EQ(count_mentions("#123", 12), 0);
  EXPECT_EQ(count_mentions("#12", 12), 1);
  EXPECT_EQ(count_mentions("(#12)", 12), 1);
  EXPECT_EQ(count_mentions("#1#12", 12), 1);
  EXPECT_EQ(count_mentions("", 12), 0);
}

TEST(OrderOfAddress, PercentileExample) {
  EXPECT_DOUBLE_EQ(percentile_linear({1, 2, 3, 100}, 0.75), 27.25);
  EXPECT_DOUBLE_EQ(percentile_linear({100, 3, 1, 2}, 0.75), 27.25);
  EXPECT_DOUBLE_EQ(percentile_linear({5}, 0.75), 5);
  EXPECT_THROW(percentile_linear({}, 0.5), Error);
}

TEST(OrderOfAddress, OnlyTheLongGapIsAHiatus) {
  // gaps 1,2,3,100 days -> threshold 27.25 days; only the last gap qualifies
  const std::int64_t resolved[] = {0, 1, 3, 6, 106};
  std::vector<Resolution> rs;
  for (int i = 0; i < 5; ++i) rs.push_back({{"o/r", i + 1}, at(0), at(resolved[i] * kDay)});
  const auto m = order_of_address(rs);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.at(IssueKey{"o/r", 5}), 1);
}

TEST(OrderOfAddress, BandOrderedByAssignment) {
  // five tight resolutions, one long gap, then a band of three assigned z, x, y
  std::vector<Resolution> rs;
  for (int i = 0; i < 5; ++i) rs.push_back({{"o/r", i + 1}, at(0), at(i * kDay)});
  rs.push_back({{"o/r", 10}, at(3 * kDay), at(50 * kDay)});   // x
  rs.push_back({{"o/r", 11}, at(4 * kDay), at(50 * kDay + 60)});  // y
  rs.push_back({{"o/r", 12}, at(2 * kDay), at(50 * kDay + 120)});  // z
  const auto m = order_of_address(rs);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.at(IssueKey{"o/r", 12}), 1);
  EXPECT_EQ(m.at(IssueKey{"o/r", 10}), 2);
  EXPECT_EQ(m.at(IssueKey{"o/r", 11}), 3);
}

TEST(OrderOfAddress, TooFewResolutions) {
  std::vector<Resolution> one = {{{"o/r", 1}, at(0), at(kDay)}};
  EXPECT_TRUE(order_of_address(one).empty());
  std::vector<Resolution> four;
  for (int i = 0; i < 4; ++i) four.push_back({{"o/r", i + 1}, at(0), at(i * i * kDay)});
  EXPECT_TRUE(order_of_address(four).empty());
}

TEST(OrderOfAddress, BandsAreContiguous) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::int64_t> gap(1, 40 * kDay), assign(0, 400 * kDay);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Resolution> rs;
    std::int64_t t = 0;
    const int n = 5 + trial % 20;
    for (int i = 0; i < n; ++i) {
      t += gap(rng);
      rs.push_back({{"o/r", i + 1}, at(assign(rng)), at(t)});
    }
    const auto m = order_of_address(rs);
    // walk resolutions in order; every band must restart at 1 and cover 1..k
    std::vector<std::int64_t> seen;
    auto check = [&] {
      std::sort(seen.begin(), seen.end());
      for (std::size_t k = 0; k < seen.size(); ++k) ASSERT_EQ(seen[k], static_cast<std::int64_t>(k + 1));
      seen.clear();
    };
    std::vector<double> gaps;
    for (int i = 1; i < n; ++i) gaps.push_back(static_cast<double>(seconds_between(rs[i - 1].resolved_at, rs[i].resolved_at)));
    const double threshold = percentile_linear(gaps, 0.75);
    for (int i = 1; i < n; ++i) {
      if (gaps[i - 1] > threshold) check();
      if (auto it = m.find(rs[i].issue); it != m.end()) seen.push_back(it->second);
    }
    check();
    EXPECT_EQ(m.count(rs[0].issue), 0u);
  }
}

TEST(Labels, PriorityScheme) {
  const auto map = priority_scheme();
  using V = std::vector<std::string>;
  EXPECT_EQ(normalize_labels(V{"P1"}, map), Importance::low);
  EXPECT_EQ(normalize_labels(V{"P3"}, map), Importance::regular);
  EXPECT_EQ(normalize_labels(V{"High Priority"}, map), Importance::high);
  EXPECT_EQ(normalize_labels(V{"bug", "P2", "P5"}, map), Importance::high);
  EXPECT_EQ(normalize_labels(V{"P2", "P5"}, map), Importance::high);
  EXPECT_EQ(normalize_labels(V{"low PRIORITY"}, map), Importance::low);
  EXPECT_EQ(normalize_labels(V{"bug"}, map), std::nullopt);
  EXPECT_EQ(normalize_labels(V{}, map), std::nullopt);
}

TEST(Labels, Monotone) {
  const auto map = priority_scheme();
  const std::vector<std::string> all = {"P1", "P2", "P3", "P4", "P5", "bug", "High Priority", "Low Priority", "other"};
  for (std::size_t mask = 0; mask < (1u << all.size()); ++mask) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask & (1u << i)) labels.push_back(all[i]);
    const auto base = normalize_labels(labels, map);
    for (const auto& extra : all) {
      auto more = labels;
      more.push_back(extra);
      const auto grown = normalize_labels(more, map);
      if (base) {
        ASSERT_TRUE(grown);
        EXPECT_GE(static_cast<int>(*grown), static_cast<int>(*base));
      }
    }
  }
}

TEST(Labels, SuggestedDraft) {
  const std::set<std::string> labels = {"P1", "P2", "P3", "P4", "P5", "High Priority", "Low Priority",
                                        "medium priority", "critical", "bug", "help wanted"};
  LabelMap m;
  for (const auto& c : suggest_label_map(labels)) m[c.raw_label] = c.verdict;
  EXPECT_EQ(m.at("P1"), Verdict::low);
  EXPECT_EQ(m.at("P2"), Verdict::regular);
  EXPECT_EQ(m.at("P3"), Verdict::regular);
  EXPECT_EQ(m.at("P4"), Verdict::high);
  EXPECT_EQ(m.at("P5"), Verdict::high);
  EXPECT_EQ(m.at("High Priority"), Verdict::high);
  EXPECT_EQ(m.at("Low Priority"), Verdict::low);
  EXPECT_EQ(m.at("medium priority"), Verdict::regular);
  EXPECT_EQ(m.at("critical"), Verdict::high);
  EXPECT_EQ(m.at("bug"), Verdict::unrelated);
  EXPECT_EQ(m.at("help wanted"), Verdict::unrelated);

  // two levels: the upper rank goes to high, the lower to regular (ties up)
  LabelMap two;
  for (const auto& c : suggest_label_map({"P2", "P5"})) two[c.raw_label] = c.verdict;
  EXPECT_EQ(two.at("P2"), Verdict::regular);
  EXPECT_EQ(two.at("P5"), Verdict::high);
}

TEST(Labels, FileRoundTrip) {
  const std::vector<LabelClassification> rows = {{"P1", Verdict::low}, {"needs, triage", Verdict::unrelated}};
  std::ostringstream out;
  write_label_map(out, rows);
  std::istringstream in(out.str());
  const auto m = read_label_map(in);
  EXPECT_EQ(m.at("p1"), Verdict::low);
  EXPECT_EQ(m.at("needs, triage"), Verdict::unrelated);

  std::istringstream bad("raw_label,verdict\nP1,urgent\n");
  try {
    read_label_map(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schema);
    EXPECT_NE(std::string(e.what()).find("label_map.csv:2"), std::string::npos);
  }
}

TEST(Fixture, MatchesGolden) {
  const auto ds = ingest::load_archive(kRepo);
  ASSERT_EQ(ds.issues.size(), 12u);
  ASSERT_EQ(ds.releases.size(), 3u);
  const auto labels = load_label_map(kRepo / "label_map.csv");
  const auto metrics = compute_all_metrics(ds, labels, *ds.analysis_time);

  std::ostringstream out;
  write_metrics_csv(out, metrics);
  EXPECT_EQ(out.str(), slurp(kRepo / "expected_metrics.csv"));

  std::ifstream golden(kRepo / "expected_metrics.csv", std::ios::binary);
  EXPECT_EQ(read_metrics_csv(golden), metrics);
}

TEST(Fixture, Invariants) {
  const auto ds = ingest::load_archive(kRepo);
  for (const auto& m : compute_all_metrics(ds, {}, *ds.analysis_time)) {
    EXPECT_GE(m.participants, 1);
    EXPECT_GE(m.open_state_duration, 0);
    EXPECT_LE(m.reopenings, m.interactions);
    EXPECT_FALSE(m.importance);
  }
}
