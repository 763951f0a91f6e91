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
#include <limits>
#include <set>
#include <thread>

#include <json.hpp>

#include "surprisal/error.hpp"
#include "surprisal/ingest.hpp"

namespace surprisal::ingest {

using nlohmann::json;
using namespace std::chrono_literals;

namespace {

class SystemClock final : public Clock {
 public:
  time_point now() override { return std::chrono::system_clock::now(); }
  void sleep_for(std::chrono::milliseconds d) override { std::this_thread::sleep_for(d); }
};

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    }
  }
  return out;
}

const std::string* header(const HttpResponse& res, const std::string& name) {
  auto it = res.headers.find(name);
  return it == res.headers.end() ? nullptr : &it->second;
}

std::optional<std::int64_t> header_int(const HttpResponse& res, const std::string& name) {
  const std::string* v = header(res, name);
  if (!v) return std::nullopt;
  try {
    return std::stoll(*v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

json parse_body(const HttpResponse& res, const std::string& target) {
  try {
    return json::parse(res.body);
  } catch (const json::parse_error&) {
    fail(ErrorCode::schema, "GET " + target + ": response is not JSON");
  }
}

const json& items_of(const json& page, const std::string& target) {
  if (!page.is_array()) fail(ErrorCode::schema, "GET " + target + ": expected a JSON array");
  return page;
}

// Link header wins; without one a full page means there may be more.
bool has_next_page(const HttpResponse& res, std::size_t items, int per_page) {
  if (const std::string* link = header(res, "link")) {
    return link->find("rel=\"next\"") != std::string::npos;
  }
  return items >= static_cast<std::size_t>(per_page);
}

std::string str_or(const json& obj, const char* key, std::string fallback = {}) {
  auto it = obj.find(key);
  return it != obj.end() && it->is_string() ? it->get<std::string>() : fallback;
}

std::string login_of(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_object()) return {};
  return str_or(*it, "login");
}

std::optional<Timestamp> time_of(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  return Timestamp::parse(it->get<std::string>());
}

Timestamp require_time(const json& obj, const char* key, const std::string& what) {
  auto t = time_of(obj, key);
  if (!t) fail(ErrorCode::schema, what + ": missing or invalid '" + key + "'");
  return *t;
}

IssueRecord issue_from_api(const std::string& repo, const json& item) {
  IssueRecord i;
  i.repo = repo;
  i.number = item.value("number", std::int64_t{0});
  const std::string what = i.key().str();
  if (i.number <= 0) fail(ErrorCode::schema, repo + ": issue without a number");
  const auto pr = item.find("pull_request");
  i.kind = pr != item.end() && pr->is_object() ? IssueKind::pull_request : IssueKind::issue;
  i.title = str_or(item, "title");
  i.body = str_or(item, "body");
  i.author = login_of(item, "user");
  if (i.author.empty()) i.author = "ghost";
  i.created_at = require_time(item, "created_at", what);
  if (str_or(item, "state") == "open") {
    i.state = IssueState::open;
  } else if (i.kind == IssueKind::pull_request && time_of(*pr, "merged_at")) {
    i.state = IssueState::merged;
  } else {
    i.state = IssueState::closed;
  }
  if (auto labels = item.find("labels"); labels != item.end() && labels->is_array()) {
    for (const auto& l : *labels) {
      if (l.is_string()) {
        i.labels.push_back(l.get<std::string>());
      } else if (l.is_object()) {
        i.labels.push_back(str_or(l, "name"));
      }
    }
  }
  if (auto r = item.find("reactions"); r != item.end() && r->is_object()) {
    for (const auto& [k, v] : r->items()) {
      if (k == "url" || k == "total_count" || !v.is_number_integer()) continue;
      i.reactions[k] = v.get<std::int64_t>();
    }
  }
  return i;
}

// Timeline entries use different field names per event type.
std::optional<EventRecord> event_from_api(const json& item) {
  EventRecord e;
  e.event_type = str_or(item, "event");
  if (e.event_type.empty()) return std::nullopt;
  auto at = time_of(item, "created_at");
  if (!at) at = time_of(item, "submitted_at");
  if (!at) return std::nullopt;
  e.at = *at;
  e.actor = login_of(item, "actor");
  if (e.actor.empty()) e.actor = login_of(item, "user");
  if (e.actor.empty()) e.actor = "ghost";
  return e;
}

}  // namespace

Clock& system_clock() {
  static SystemClock clock;
  return clock;
}

RateLimiter::RateLimiter(int calls_per_hour, Clock& clock) : limit_(calls_per_hour), clock_(clock) {
  if (calls_per_hour < 1) fail(ErrorCode::invalid_argument, "rate limit must be at least 1 call/hour");
}

void RateLimiter::acquire() {
  auto now = clock_.now();
  while (true) {
    while (!issued_.empty() && issued_.front() <= now - 1h) issued_.pop_front();
    if (issued_.size() < static_cast<std::size_t>(limit_)) break;
    const auto wait = issued_.front() + 1h - now;
    clock_.sleep_for(std::max(std::chrono::ceil<std::chrono::milliseconds>(wait), 1ms));
    now = clock_.now();
  }
  issued_.push_back(now);
}

GitHubClient::GitHubClient(ClientOptions options, std::unique_ptr<HttpTransport> transport,
                           Clock& clock)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      clock_(clock),
      limiter_(options_.rate_limit, clock) {
  if (!transport_) fail(ErrorCode::invalid_argument, "GitHubClient needs a transport");
  if (options_.per_page < 1 || options_.per_page > 100) {
    fail(ErrorCode::invalid_argument, "per_page must be within 1..100");
  }
}

HttpResponse GitHubClient::request(const std::string& target) {
  std::map<std::string, std::string> headers = {
      {"Accept", "application/vnd.github+json"},
      {"User-Agent", options_.user_agent},
      {"X-GitHub-Api-Version", "2022-11-28"},
  };
  if (!options_.token.empty()) headers["Authorization"] = "Bearer " + options_.token;

  int failures = 0;
  int pauses = 0;
  while (true) {
    limiter_.acquire();
    ++calls_;
    std::string why;
    std::optional<HttpResponse> got;
    try {
      got = transport_->get(target, headers);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::network) throw;
      why = e.what();
    }
    if (got) {
      const HttpResponse& res = *got;
      if (res.status == 401) fail(ErrorCode::auth_failure, "GET " + target + ": bad credentials");
      if (res.status == 403 || res.status == 429) {
        std::optional<std::chrono::seconds> wait;
        if (auto after = header_int(res, "retry-after")) {
          wait = std::chrono::seconds(std::max<std::int64_t>(*after, 1));
        } else if (header_int(res, "x-ratelimit-remaining") == 0) {
          const auto reset = header_int(res, "x-ratelimit-reset").value_or(0);
          const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                               clock_.now().time_since_epoch()).count();
          wait = std::chrono::seconds(std::max<std::int64_t>(reset - now, 1));
        } else if (res.status == 429) {
          wait = 60s;
        }
        if (!wait) fail(ErrorCode::auth_failure, "GET " + target + ": forbidden");
        if (++pauses > options_.max_rate_limit_pauses) {
          throw RateLimitedError(*wait, "RateLimited: GET " + target + ": quota still exhausted");
        }
        clock_.sleep_for(*wait);
        continue;  // pausing is not a failure
      }
      if (res.status >= 200 && res.status < 300) return std::move(*got);
      if (res.status < 500) {
        fail(ErrorCode::network, "GET " + target + ": HTTP " + std::to_string(res.status));
      }
      why = "HTTP " + std::to_string(res.status);
    }
    if (failures >= options_.max_retries) {
      fail(ErrorCode::network, "GET " + target + ": " + why + " (gave up after " +
                                   std::to_string(failures + 1) + " attempts)");
    }
    clock_.sleep_for(std::chrono::seconds(1 << failures));
    ++failures;
  }
}

std::int64_t GitHubClient::latest_issue_number(const std::string& full_name) {
  const std::string target =
      "/repos/" + full_name + "/issues?state=all&sort=created&direction=desc&per_page=1";
  const json page = parse_body(request(target), target);
  const json& items = items_of(page, target);
  if (items.empty()) return 0;
  return items.front().value("number", std::int64_t{0});
}

std::vector<RepositorySnapshot> GitHubClient::fetch_top_repositories(int count) {
  if (count < 1) fail(ErrorCode::invalid_argument, "repository count must be positive");
  std::vector<RepositorySnapshot> found;
  std::set<std::string> seen;
  std::optional<std::int64_t> ceiling;
  const int max_pages = std::max(1, 1000 / options_.per_page);

  while (static_cast<int>(found.size()) < count) {
    const std::string query = ceiling ? "stars:<=" + std::to_string(*ceiling) : "stars:>=0";
    std::int64_t lowest = std::numeric_limits<std::int64_t>::max();
    bool added = false;
    bool exhausted = false;
    for (int page = 1; page <= max_pages && static_cast<int>(found.size()) < count; ++page) {
      const std::string target = "/search/repositories?q=" + url_encode(query) +
                                 "&sort=stars&order=desc&per_page=" +
                                 std::to_string(options_.per_page) + "&page=" + std::to_string(page);
      const HttpResponse res = request(target);
      const json body = parse_body(res, target);
      if (!body.is_object() || !body.contains("items") || !body["items"].is_array()) {
        fail(ErrorCode::schema, "GET " + target + ": missing items");
      }
      const json& items = body["items"];
      for (const auto& item : items) {
        RepositorySnapshot r;
        r.full_name = str_or(item, "full_name");
        if (!valid_full_name(r.full_name)) continue;
        r.stars = item.value("stargazers_count", std::int64_t{0});
        lowest = std::min(lowest, r.stars);
        if (auto lang = item.find("language"); lang != item.end() && lang->is_string()) {
          r.primary_language_hint = lang->get<std::string>();
        }
        if (!seen.insert(r.full_name).second) continue;
        added = true;
        found.push_back(std::move(r));
      }
      if (!has_next_page(res, items.size(), options_.per_page)) {
        exhausted = true;
        break;
      }
    }
    if (exhausted || lowest == std::numeric_limits<std::int64_t>::max()) break;
    // Past the 1000-result cap: restart below the lowest star count seen. If
    // a whole window shared one star count, step below it.
    ceiling = added ? lowest : lowest - 1;
    if (*ceiling < 0) break;
  }

  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.stars > b.stars; });
  if (static_cast<int>(found.size()) > count) found.resize(static_cast<std::size_t>(count));
  for (auto& r : found) {
    r.issue_count = latest_issue_number(r.full_name);
    r.fetched_at = Timestamp(std::chrono::floor<std::chrono::seconds>(clock_.now()));
  }
  return found;
}

void GitHubClient::fetch_issues(const RepositorySnapshot& repo,
                                const std::function<void(IssueRecord)>& sink) {
  const std::string per_page = std::to_string(options_.per_page);
  std::set<std::int64_t> seen;
  for (int page = 1;; ++page) {
    const std::string target = "/repos/" + repo.full_name +
                               "/issues?state=all&sort=created&direction=asc&per_page=" + per_page +
                               "&page=" + std::to_string(page);
    const HttpResponse res = request(target);
    const json body = parse_body(res, target);
    const json& items = items_of(body, target);
    bool any_new = false;
    for (const auto& item : items) {
      if (!item.is_object()) continue;
      IssueRecord issue = issue_from_api(repo.full_name, item);
      if (!seen.insert(issue.number).second) continue;
      any_new = true;

      try {
        for (int ev_page = 1;; ++ev_page) {
          const std::string ev_target = "/repos/" + repo.full_name + "/issues/" +
                                        std::to_string(issue.number) + "/timeline?per_page=" +
                                        per_page + "&page=" + std::to_string(ev_page);
          const HttpResponse ev_res = request(ev_target);
          const json ev_body = parse_body(ev_res, ev_target);
          const json& events = items_of(ev_body, ev_target);
          for (const auto& ev : events) {
            if (!ev.is_object()) continue;
            auto e = event_from_api(ev);
            if (!e) continue;
            if (e->event_type == "assigned") {
              const std::string who = login_of(ev, "assignee");
              if (!who.empty()) issue.assignee_history.push_back({who, e->at});
            }
            issue.events.push_back(std::move(*e));
          }
          if (!has_next_page(ev_res, events.size(), options_.per_page)) break;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::network && e.code() != ErrorCode::schema) throw;
        issue.partial_data = true;
      }
      std::stable_sort(issue.events.begin(), issue.events.end(),
                       [](const auto& a, const auto& b) { return a.at < b.at; });
      sink(std::move(issue));
    }
    if (!any_new || !has_next_page(res, items.size(), options_.per_page)) break;
  }
}

std::vector<IssueRecord> GitHubClient::fetch_issues(const RepositorySnapshot& repo) {
  std::vector<IssueRecord> out;
  fetch_issues(repo, [&](IssueRecord r) { out.push_back(std::move(r)); });
  return out;
}

std::vector<ReleaseRecord> GitHubClient::fetch_releases(const RepositorySnapshot& repo) {
  std::vector<ReleaseRecord> out;
  for (int page = 1;; ++page) {
    const std::string target = "/repos/" + repo.full_name + "/releases?per_page=" +
                               std::to_string(options_.per_page) + "&page=" + std::to_string(page);
    const HttpResponse res = request(target);
    const json body = parse_body(res, target);
    const json& items = items_of(body, target);
    for (const auto& item : items) {
      ReleaseRecord r;
      r.repo = repo.full_name;
      r.tag = str_or(item, "tag_name");
      if (r.tag.empty()) continue;
      auto at = time_of(item, "published_at");
      if (!at) at = time_of(item, "created_at");
      if (!at) continue;  // unpublished draft
      r.published_at = *at;
      r.body = str_or(item, "body");
      out.push_back(std::move(r));
    }
    if (!has_next_page(res, items.size(), options_.per_page)) break;
  }
  return out;
}

}  // namespace surprisal::ingest
