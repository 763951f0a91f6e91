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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <unordered_map>

#include "surprisal/csv.hpp"
#include "surprisal/error.hpp"
#include "surprisal/metrics.hpp"

namespace surprisal::metrics {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_closing(const EventRecord& e) { return e.event_type == "closed" || e.event_type == "merged"; }

std::optional<Timestamp> final_close(const IssueRecord& issue) {
  std::optional<Timestamp> last;
  for (const auto& e : issue.events) {
    if (is_closing(e) && (!last || e.at >= *last)) last = e.at;
  }
  return last;
}

int rank_of(Verdict v) {
  switch (v) {
    case Verdict::low: return 0;
    case Verdict::regular: return 1;
    case Verdict::high: return 2;
    case Verdict::unrelated: return -1;
  }
  return -1;
}

}  // namespace

std::string_view to_string(Importance i) {
  switch (i) {
    case Importance::low: return "low";
    case Importance::regular: return "regular";
    case Importance::high: return "high";
  }
  return "regular";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::low: return "low";
    case Verdict::regular: return "regular";
    case Verdict::high: return "high";
    case Verdict::unrelated: return "unrelated";
  }
  return "unrelated";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  const std::string t = ascii_lower(text);
  if (t == "low" || t == "low-importance") return Verdict::low;
  if (t == "regular" || t == "regular-importance") return Verdict::regular;
  if (t == "high" || t == "high-importance") return Verdict::high;
  if (t == "unrelated") return Verdict::unrelated;
  return std::nullopt;
}

std::int64_t count_reopenings(const IssueRecord& issue) {
  return std::count_if(issue.events.begin(), issue.events.end(),
                       [](const EventRecord& e) { return e.event_type == "reopened"; });
}

std::int64_t count_participants(const IssueRecord& issue) {
  std::set<std::string> who;
  if (!issue.author.empty()) who.insert(issue.author);
  for (const auto& e : issue.events) who.insert(e.actor);
  return std::max<std::int64_t>(static_cast<std::int64_t>(who.size()), 1);
}

std::int64_t count_interactions(const IssueRecord& issue) {
  return static_cast<std::int64_t>(issue.events.size());
}

std::int64_t count_reactions(const IssueRecord& issue) {
  std::int64_t n = 0;
  for (const auto& [kind, count] : issue.reactions) n += count;
  return n;
}

OpenDuration open_state_duration(const IssueRecord& issue, Timestamp analysis_time) {
  Timestamp end = analysis_time;
  if (issue.state != IssueState::open) {
    if (auto closed = final_close(issue)) end = *closed;
  }
  const std::int64_t d = seconds_between(issue.created_at, end);
  if (d < 0) return {0, true};
  return {d, false};
}

std::int64_t count_mentions(std::string_view text, std::int64_t number) {
  const std::string needle = "#" + std::to_string(number);
  std::int64_t n = 0;
  for (auto at = text.find(needle); at != std::string_view::npos; at = text.find(needle, at + 1)) {
    const std::size_t after = at + needle.size();
    if (after < text.size() && std::isdigit(static_cast<unsigned char>(text[after]))) continue;
    ++n;
  }
  return n;
}

std::int64_t release_mentions(std::span<const ReleaseRecord> releases, std::int64_t number) {
  std::int64_t n = 0;
  for (const auto& r : releases) n += count_mentions(r.body, number);
  return n;
}

double percentile_linear(std::vector<double> values, double q) {
  if (values.empty()) fail(ErrorCode::invalid_argument, "percentile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorCode::invalid_argument, "percentile outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::map<IssueKey, std::int64_t> order_of_address(std::span<const Resolution> resolutions) {
  std::map<IssueKey, std::int64_t> out;
  if (resolutions.size() < kMinResolutions) return out;
  std::vector<Resolution> rs(resolutions.begin(), resolutions.end());
  std::stable_sort(rs.begin(), rs.end(), [](const Resolution& a, const Resolution& b) {
    return a.resolved_at < b.resolved_at;
  });

  std::vector<double> gaps;
  for (std::size_t i = 1; i < rs.size(); ++i) {
    gaps.push_back(static_cast<double>(seconds_between(rs[i - 1].resolved_at, rs[i].resolved_at)));
  }
  const double threshold = percentile_linear(gaps, 0.75);

  // Band starts: index i whose preceding gap is a hiatus.
  std::vector<std::size_t> starts;
  for (std::size_t i = 1; i < rs.size(); ++i) {
    if (gaps[i - 1] > threshold) starts.push_back(i);
  }
  for (std::size_t b = 0; b < starts.size(); ++b) {
    const std::size_t end = b + 1 < starts.size() ? starts[b + 1] : rs.size();
    std::vector<const Resolution*> band;
    for (std::size_t i = starts[b]; i < end; ++i) band.push_back(&rs[i]);
    std::stable_sort(band.begin(), band.end(), [](const Resolution* a, const Resolution* c) {
      return a->assigned_at < c->assigned_at;
    });
    for (std::size_t k = 0; k < band.size(); ++k) {
      auto [it, inserted] = out.emplace(band[k]->issue, static_cast<std::int64_t>(k + 1));
      if (!inserted) it->second = std::min(it->second, static_cast<std::int64_t>(k + 1));
    }
  }
  return out;
}

std::map<IssueKey, std::int64_t> order_of_address(const Dataset& dataset) {
  // (repo, contributor) -> resolutions
  std::map<std::pair<std::string, std::string>, std::vector<Resolution>> per;
  for (const auto& issue : dataset.issues) {
    if (issue.state == IssueState::open || issue.assignee_history.empty()) continue;
    const auto resolved = final_close(issue);
    if (!resolved) continue;
    std::map<std::string, Timestamp> earliest;
    for (const auto& a : issue.assignee_history) {
      auto [it, inserted] = earliest.emplace(a.contributor, a.assigned_at);
      if (!inserted) it->second = std::min(it->second, a.assigned_at);
    }
    for (const auto& [who, at] : earliest) {
      per[{issue.repo, who}].push_back({issue.key(), at, *resolved});
    }
  }
  std::map<IssueKey, std::int64_t> out;
  for (const auto& [key, rs] : per) {
    for (const auto& [issue, ordinal] : order_of_address(rs)) {
      auto [it, inserted] = out.emplace(issue, ordinal);
      if (!inserted) it->second = std::min(it->second, ordinal);
    }
  }
  return out;
}

std::optional<Importance> normalize_labels(std::span<const std::string> labels,
                                           const LabelMap& classification) {
  int best = -1;
  for (const auto& l : labels) {
    auto it = classification.find(ascii_lower(l));
    if (it != classification.end()) best = std::max(best, rank_of(it->second));
  }
  if (best < 0) return std::nullopt;
  return static_cast<Importance>(best);
}

std::vector<LabelClassification> suggest_label_map(const std::set<std::string>& labels) {
  static const std::regex p_level(R"(^(?:priority[:/ _-]*)?p[ _-]?(\d+)$)", std::regex::icase);
  static const std::regex prio_word(R"(priority|importance|prio|severity)", std::regex::icase);
  static const std::regex urgent(R"(critical|urgent|blocker|showstopper)", std::regex::icase);
  static const std::regex high(R"((^|[^a-z])(high|highest|major)([^a-z]|$))", std::regex::icase);
  static const std::regex low(R"((^|[^a-z])(low|lowest|minor|trivial)([^a-z]|$))", std::regex::icase);
  static const std::regex mid(R"((^|[^a-z])(medium|normal|regular|moderate|mid)([^a-z]|$))",
                              std::regex::icase);

  std::map<std::string, long> levels;  // label -> k for P<k>
  std::set<long> distinct;
  for (const auto& l : labels) {
    std::smatch m;
    if (std::regex_match(l, m, p_level)) {
      const long k = std::stol(m[1].str());
      levels[l] = k;
      distinct.insert(k);
    }
  }
  const std::vector<long> ranks(distinct.begin(), distinct.end());

  std::vector<LabelClassification> out;
  for (const auto& l : labels) {
    if (l.empty()) continue;
    Verdict v = Verdict::unrelated;
    if (auto it = levels.find(l); it != levels.end()) {
      const auto r = static_cast<std::size_t>(std::lower_bound(ranks.begin(), ranks.end(), it->second) -
                                              ranks.begin());
      const auto m = static_cast<double>(ranks.size());
      const int bin = static_cast<int>(std::ceil(static_cast<double>(r + 1) * 3.0 / m)) - 1;
      v = bin <= 0 ? Verdict::low : bin == 1 ? Verdict::regular : Verdict::high;
    } else if (std::regex_search(l, urgent)) {
      v = Verdict::high;
    } else if (std::regex_search(l, prio_word)) {
      if (std::regex_search(l, high)) {
        v = Verdict::high;
      } else if (std::regex_search(l, low)) {
        v = Verdict::low;
      } else if (std::regex_search(l, mid)) {
        v = Verdict::regular;
      }
    }
    out.push_back({l, v});
  }
  return out;
}

LabelMap read_label_map(std::istream& in) {
  static constexpr std::string_view kCols[] = {"raw_label", "verdict"};
  const auto table = csv::read_table(in, kCols, "label_map.csv");
  LabelMap out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = "label_map.csv:" + std::to_string(table.lines[i]);
    if (row[0].empty()) fail(ErrorCode::schema, where + ": empty raw_label");
    const auto v = parse_verdict(row[1]);
    if (!v) fail(ErrorCode::schema, where + ": unknown verdict '" + row[1] + "'");
    out[ascii_lower(row[0])] = *v;
  }
  return out;
}

LabelMap load_label_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  return read_label_map(in);
}

void write_label_map(std::ostream& out, std::span<const LabelClassification> rows) {
  const std::vector<std::string> header = {"raw_label", "verdict"};
  csv::write_row(out, header);
  for (const auto& r : rows) {
    const std::vector<std::string> fields = {r.raw_label, std::string(to_string(r.verdict))};
    csv::write_row(out, fields);
  }
}

std::vector<IssueMetrics> compute_all_metrics(const Dataset& dataset, const LabelMap& labels,
                                              Timestamp analysis_time) {
  std::unordered_map<std::string, std::vector<ReleaseRecord>> releases;
  for (const auto& r : dataset.releases) releases[r.repo].push_back(r);
  const auto ordinals = order_of_address(dataset);

  std::vector<IssueMetrics> out;
  out.reserve(dataset.issues.size());
  for (const auto& issue : dataset.issues) {
    IssueMetrics m;
    m.source = issue.key();
    m.kind = issue.kind;
    m.created_at = issue.created_at;
    m.reopenings = count_reopenings(issue);
    m.participants = count_participants(issue);
    m.interactions = count_interactions(issue);
    const auto d = open_state_duration(issue, analysis_time);
    m.open_state_duration = d.seconds;
    m.clock_skew = d.clock_skew;
    if (auto it = releases.find(issue.repo); it != releases.end()) {
      m.release_mentions = release_mentions(it->second, issue.number);
    }
    if (auto it = ordinals.find(m.source); it != ordinals.end()) m.order_of_address = it->second;
    m.reactions = count_reactions(issue);
    m.importance = normalize_labels(issue.labels, labels);
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

constexpr std::string_view kMetricColumns[] = {
    "repo", "number", "kind", "created_at", "reopenings", "participants", "interactions",
    "open_state_duration_s", "release_mentions", "order_of_address", "reactions", "importance",
    "clock_skew"};

std::int64_t parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::schema, where + ": expected an integer, found '" + s + "'");
}

}  // namespace

void write_metrics_csv(std::ostream& out, std::span<const IssueMetrics> rows) {
  csv::write_row(out, std::vector<std::string>(std::begin(kMetricColumns), std::end(kMetricColumns)));
  for (const auto& m : rows) {
    const std::vector<std::string> f = {
        m.source.repo,
        std::to_string(m.source.number),
        std::string(to_string(m.kind)),
        m.created_at.iso8601(),
        std::to_string(m.reopenings),
        std::to_string(m.participants),
        std::to_string(m.interactions),
        std::to_string(m.open_state_duration),
        std::to_string(m.release_mentions),
        m.order_of_address ? std::to_string(*m.order_of_address) : std::string(),
        std::to_string(m.reactions),
        m.importance ? std::string(to_string(*m.importance)) : std::string(),
        m.clock_skew ? "1" : "0"};
    csv::write_row(out, f);
  }
}

std::vector<IssueMetrics> read_metrics_csv(std::istream& in) {
  const auto table = csv::read_table(in, kMetricColumns, "metrics.csv");
  std::vector<IssueMetrics> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::string where = "metrics.csv:" + std::to_string(table.lines[i]);
    IssueMetrics m;
    m.source = {r[0], parse_int(r[1], where)};
    const auto kind = parse_issue_kind(r[2]);
    const auto created = Timestamp::parse(r[3]);
    if (!kind || !created) fail(ErrorCode::schema, where + ": bad kind or created_at");
    m.kind = *kind;
    m.created_at = *created;
    m.reopenings = parse_int(r[4], where);
    m.participants = parse_int(r[5], where);
    m.interactions = parse_int(r[6], where);
    m.open_state_duration = parse_int(r[7], where);
    m.release_mentions = parse_int(r[8], where);
    if (!r[9].empty()) m.order_of_address = parse_int(r[9], where);
    m.reactions = parse_int(r[10], where);
    if (!r[11].empty()) {
      const auto v = parse_verdict(r[11]);
      if (!v || *v == Verdict::unrelated) fail(ErrorCode::schema, where + ": bad importance");
      m.importance = static_cast<Importance>(rank_of(*v));
    }
    m.clock_skew = r[12] == "1";
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace surprisal::metrics
