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

#ifndef SURPRISAL_INGEST_HPP
#define SURPRISAL_INGEST_HPP

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surprisal/records.hpp"

namespace surprisal::ingest {

// ---------------------------------------------------------------------------
// Archive directory: repos.jsonl, issues.jsonl, releases.jsonl, meta.json.
// One JSON object per line with keys in sorted order, so a saved archive is
// byte-stable for a given dataset.

inline constexpr int kArchiveSchemaVersion = 1;

void save_archive(const Dataset& dataset, const std::filesystem::path& dir);
/// Throws IoError for missing files and SchemaError (with file, line, record
/// and field) for malformed content.
Dataset load_archive(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Selection

/// A title counts as English when, after removing `code` spans, more than half
/// of its letters are ASCII letters.
bool title_looks_english(std::string_view title);
/// At least `threshold` of the titles look English. False for no titles.
bool looks_english(std::span<const std::string> titles, double threshold = 0.8);

using TitleSampler = std::function<std::vector<std::string>(const RepositorySnapshot&)>;

/// Keeps repositories with issue_count >= min_issues and, when english_only,
/// whose sampled titles pass looks_english(). Input order is preserved.
/// english_only without a sampler throws InvalidArgument.
std::vector<RepositorySnapshot> filter_repositories(std::span<const RepositorySnapshot> repos,
                                                    std::int64_t min_issues = 1000,
                                                    bool english_only = false,
                                                    const TitleSampler& sampler = {});

/// Sampler over the issue titles already present in a dataset.
TitleSampler titles_from(const Dataset& dataset, std::size_t max_titles = 200);

// ---------------------------------------------------------------------------
// Remote API

struct HttpResponse {
  int status = 0;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Throws Error(network) when no response could be obtained.
  virtual HttpResponse get(const std::string& target,
                           const std::map<std::string, std::string>& headers) = 0;
};

/// cpp-httplib transport for "http://host:port" or "https://host".
std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url);

class Clock {
 public:
  using time_point = std::chrono::system_clock::time_point;
  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

Clock& system_clock();

/// Sliding one-hour window: acquire() blocks (via the clock) until fewer than
/// `calls_per_hour` calls were issued in the preceding hour.
class RateLimiter {
 public:
  RateLimiter(int calls_per_hour, Clock& clock);
  void acquire();
  int calls_per_hour() const { return limit_; }

 private:
  int limit_;
  Clock& clock_;
  std::deque<Clock::time_point> issued_;
};

struct ClientOptions {
  std::string token;
  int rate_limit = 5000;  // calls per hour
  int max_retries = 3;    // after the first attempt; backoff 1 s, 2 s, 4 s
  int per_page = 100;
  int max_rate_limit_pauses = 20;
  std::string user_agent = "surprisal";
};

class GitHubClient {
 public:
  GitHubClient(ClientOptions options, std::unique_ptr<HttpTransport> transport,
               Clock& clock = system_clock());

  /// Up to `count` repositories by stars, descending. Walks past the search
  /// API's 1000-result cap by narrowing the star range.
  std::vector<RepositorySnapshot> fetch_top_repositories(int count);
  /// Every issue and pull request with events, labels and reactions. Issues
  /// whose event pages keep failing are delivered with partial_data set.
  void fetch_issues(const RepositorySnapshot& repo, const std::function<void(IssueRecord)>& sink);
  std::vector<IssueRecord> fetch_issues(const RepositorySnapshot& repo);
  std::vector<ReleaseRecord> fetch_releases(const RepositorySnapshot& repo);

  std::size_t calls_made() const { return calls_; }

 private:
  HttpResponse request(const std::string& target);
  std::int64_t latest_issue_number(const std::string& full_name);

  ClientOptions options_;
  std::unique_ptr<HttpTransport> transport_;
  Clock& clock_;
  RateLimiter limiter_;
  std::size_t calls_ = 0;
};

}  // namespace surprisal::ingest

#endif  // SURPRISAL_INGEST_HPP
