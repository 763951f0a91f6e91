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
#include <fstream>
#include <set>

#include <json.hpp>

#include "surprisal/error.hpp"
#include "surprisal/ingest.hpp"

namespace surprisal::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// -- writing ---------------------------------------------------------------

json to_json(const RepositorySnapshot& r) {
  return {{"full_name", r.full_name},
          {"stars", r.stars},
          {"issue_count", r.issue_count},
          {"primary_language_hint",
           r.primary_language_hint ? json(*r.primary_language_hint) : json(nullptr)},
          {"fetched_at", r.fetched_at.iso8601()}};
}

json to_json(const IssueRecord& i) {
  json events = json::array();
  for (const auto& e : i.events) {
    events.push_back({{"event_type", e.event_type}, {"actor", e.actor}, {"at", e.at.iso8601()}});
  }
  json assignees = json::array();
  for (const auto& a : i.assignee_history) {
    assignees.push_back({{"contributor", a.contributor}, {"assigned_at", a.assigned_at.iso8601()}});
  }
  json reactions = json::object();
  for (const auto& [k, v] : i.reactions) reactions[k] = v;
  return {{"repo", i.repo},
          {"number", i.number},
          {"kind", to_string(i.kind)},
          {"title", i.title},
          {"body", i.body},
          {"author", i.author},
          {"created_at", i.created_at.iso8601()},
          {"state", to_string(i.state)},
          {"events", std::move(events)},
          {"labels", i.labels},
          {"reactions", std::move(reactions)},
          {"assignee_history", std::move(assignees)},
          {"partial_data", i.partial_data}};
}

json to_json(const ReleaseRecord& r) {
  return {{"repo", r.repo},
          {"tag", r.tag},
          {"published_at", r.published_at.iso8601()},
          {"body", r.body}};
}

template <typename T>
void write_jsonl(const fs::path& path, const std::vector<T>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  if (!out) fail(ErrorCode::io, "failed writing " + path.string());
}

// -- reading ---------------------------------------------------------------

// Location of the record being decoded, for error messages.
struct Where {
  std::string file;
  std::size_t line = 0;
  std::string record;

  [[noreturn]] void bad(const std::string& field, const std::string& what) const {
    std::string msg = file + ":" + std::to_string(line);
    if (!record.empty()) msg += " (" + record + ")";
    if (!field.empty()) msg += ": field '" + field + "'";
    fail(ErrorCode::schema, msg + ": " + what);
  }
};

const json& field(const json& obj, const char* key, const Where& at) {
  auto it = obj.find(key);
  if (it == obj.end()) at.bad(key, "missing");
  return *it;
}

std::string get_string(const json& obj, const char* key, const Where& at) {
  const json& v = field(obj, key, at);
  if (!v.is_string()) at.bad(key, "expected a string");
  return v.get<std::string>();
}

std::int64_t get_int(const json& obj, const char* key, const Where& at) {
  const json& v = field(obj, key, at);
  if (!v.is_number_integer()) at.bad(key, "expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t get_nonnegative(const json& obj, const char* key, const Where& at) {
  const auto v = get_int(obj, key, at);
  if (v < 0) at.bad(key, "must be non-negative");
  return v;
}

Timestamp get_time(const json& obj, const char* key, const Where& at) {
  const auto ts = Timestamp::parse(get_string(obj, key, at));
  if (!ts) at.bad(key, "not an ISO-8601 UTC timestamp");
  return *ts;
}

const json& get_array(const json& obj, const char* key, const Where& at) {
  const json& v = field(obj, key, at);
  if (!v.is_array()) at.bad(key, "expected an array");
  return v;
}

RepositorySnapshot repo_from_json(const json& j, Where& at) {
  RepositorySnapshot r;
  r.full_name = get_string(j, "full_name", at);
  at.record = r.full_name;
  if (!valid_full_name(r.full_name)) at.bad("full_name", "expected owner/name");
  r.stars = get_nonnegative(j, "stars", at);
  r.issue_count = get_nonnegative(j, "issue_count", at);
  const json& hint = field(j, "primary_language_hint", at);
  if (hint.is_string()) {
    r.primary_language_hint = hint.get<std::string>();
  } else if (!hint.is_null()) {
    at.bad("primary_language_hint", "expected a string or null");
  }
  r.fetched_at = get_time(j, "fetched_at", at);
  return r;
}

IssueRecord issue_from_json(const json& j, Where& at) {
  IssueRecord i;
  i.repo = get_string(j, "repo", at);
  i.number = get_int(j, "number", at);
  at.record = i.key().str();
  if (!valid_full_name(i.repo)) at.bad("repo", "expected owner/name");
  if (i.number <= 0) at.bad("number", "must be positive");
  const auto kind = parse_issue_kind(get_string(j, "kind", at));
  if (!kind) at.bad("kind", "expected issue or pull_request");
  i.kind = *kind;
  i.title = get_string(j, "title", at);
  i.body = get_string(j, "body", at);
  i.author = get_string(j, "author", at);
  i.created_at = get_time(j, "created_at", at);
  const auto state = parse_issue_state(get_string(j, "state", at));
  if (!state) at.bad("state", "expected open, closed or merged");
  i.state = *state;

  for (const auto& e : get_array(j, "events", at)) {
    if (!e.is_object()) at.bad("events", "expected objects");
    EventRecord ev{get_string(e, "event_type", at), get_string(e, "actor", at), get_time(e, "at", at)};
    if (ev.event_type.empty()) at.bad("events.event_type", "must be non-empty");
    if (!i.events.empty() && ev.at < i.events.back().at) at.bad("events", "not sorted by time");
    i.events.push_back(std::move(ev));
  }
  for (const auto& l : get_array(j, "labels", at)) {
    if (!l.is_string()) at.bad("labels", "expected strings");
    i.labels.push_back(l.get<std::string>());
  }
  const json& reactions = field(j, "reactions", at);
  if (!reactions.is_object()) at.bad("reactions", "expected an object");
  for (const auto& [k, v] : reactions.items()) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      at.bad("reactions." + k, "expected a non-negative integer");
    }
    i.reactions[k] = v.get<std::int64_t>();
  }
  for (const auto& a : get_array(j, "assignee_history", at)) {
    if (!a.is_object()) at.bad("assignee_history", "expected objects");
    i.assignee_history.push_back({get_string(a, "contributor", at), get_time(a, "assigned_at", at)});
  }
  const json& partial = field(j, "partial_data", at);
  if (!partial.is_boolean()) at.bad("partial_data", "expected a boolean");
  i.partial_data = partial.get<bool>();
  return i;
}

ReleaseRecord release_from_json(const json& j, Where& at) {
  ReleaseRecord r;
  r.repo = get_string(j, "repo", at);
  r.tag = get_string(j, "tag", at);
  at.record = r.repo + "@" + r.tag;
  if (r.tag.empty()) at.bad("tag", "must be non-empty");
  r.published_at = get_time(j, "published_at", at);
  r.body = get_string(j, "body", at);
  return r;
}

template <typename T, typename Decode>
std::vector<T> read_jsonl(const fs::path& path, Decode decode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  std::vector<T> out;
  Where at{path.filename().string(), 0, {}};
  std::string line;
  while (std::getline(in, line)) {
    ++at.line;
    at.record.clear();
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      at.bad("", std::string("invalid JSON (") + e.what() + ")");
    }
    if (!j.is_object()) at.bad("", "expected a JSON object");
    out.push_back(decode(j, at));
  }
  return out;
}

}  // namespace

void save_archive(const Dataset& dataset, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  write_jsonl(dir / "repos.jsonl", dataset.repositories);
  write_jsonl(dir / "issues.jsonl", dataset.issues);
  write_jsonl(dir / "releases.jsonl", dataset.releases);

  const json meta = {
      {"schema_version", kArchiveSchemaVersion},
      {"analysis_time", dataset.analysis_time ? json(dataset.analysis_time->iso8601()) : json(nullptr)},
      {"tool_version", dataset.tool_version}};
  std::ofstream out(dir / "meta.json", std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << '\n';
  if (!out) fail(ErrorCode::io, "failed writing meta.json");
}

Dataset load_archive(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorCode::io, "archive directory not found: " + dir.string());
  Dataset d;

  {
    const fs::path meta_path = dir / "meta.json";
    std::ifstream in(meta_path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open " + meta_path.string());
    Where at{"meta.json", 1, {}};
    json meta;
    try {
      meta = json::parse(in);
    } catch (const json::parse_error& e) {
      at.bad("", std::string("invalid JSON (") + e.what() + ")");
    }
    if (!meta.is_object()) at.bad("", "expected a JSON object");
    if (get_int(meta, "schema_version", at) != kArchiveSchemaVersion) {
      at.bad("schema_version", "unsupported version");
    }
    const json& t = field(meta, "analysis_time", at);
    if (t.is_string()) {
      d.analysis_time = get_time(meta, "analysis_time", at);
    } else if (!t.is_null()) {
      at.bad("analysis_time", "expected a timestamp or null");
    }
    d.tool_version = get_string(meta, "tool_version", at);
  }

  d.repositories = read_jsonl<RepositorySnapshot>(dir / "repos.jsonl", repo_from_json);
  d.issues = read_jsonl<IssueRecord>(dir / "issues.jsonl", issue_from_json);
  d.releases = read_jsonl<ReleaseRecord>(dir / "releases.jsonl", release_from_json);

  std::set<IssueKey> seen;
  for (const auto& i : d.issues) {
    if (!seen.insert(i.key()).second) {
      fail(ErrorCode::schema, "issues.jsonl: duplicate issue " + i.key().str());
    }
  }
  return d;
}

}  // namespace surprisal::ingest
