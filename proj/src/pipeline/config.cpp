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
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "surprisal/error.hpp"
#include "surprisal/pipeline.hpp"

namespace surprisal::pipeline {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) {
    fail(ErrorCode::config, std::string(key) + ": expected a number, got '" + std::string(value) + "'");
  }
  return out;
}

// from_chars for double is missing in older libstdc++ builds.
double parse_real(std::string_view key, std::string_view value) {
  const std::string s(value);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    fail(ErrorCode::config, std::string(key) + ": expected a number, got '" + s + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(ErrorCode::config, std::string(key) + ": expected true or false, got '" + std::string(value) + "'");
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto item = trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string toml_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) ++i;
      out += v[i];
    }
    return out;
  }
  return std::string(v);
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view raw) {
  const std::string value(trim(raw));
  if (key == "archive") {
    archive_path = value;
  } else if (key == "output_dir") {
    output_dir = value;
  } else if (key == "order") {
    order = parse_number<int>(key, value);
  } else if (key == "mode") {
    const auto m = lm::parse_score_mode(value);
    if (!m) fail(ErrorCode::config, "mode: expected conditional_ngram or literal_unigram, got '" + value + "'");
    mode = *m;
  } else if (key == "alpha") {
    alpha = parse_real(key, value);
  } else if (key == "rate_limit") {
    rate_limit = parse_number<int>(key, value);
  } else if (key == "min_issues") {
    min_issues = parse_number<int>(key, value);
  } else if (key == "max_repositories") {
    max_repositories = parse_number<int>(key, value);
  } else if (key == "english_only") {
    english_only = parse_bool(key, value);
  } else if (key == "github_token") {
    github_token = value;
  } else if (key == "api_base") {
    api_base = value;
  } else if (key == "analysis_time") {
    if (value.empty()) {
      analysis_time.reset();
      return;
    }
    const auto t = Timestamp::parse(value);
    if (!t) fail(ErrorCode::config, "analysis_time: expected YYYY-MM-DDTHH:MM:SSZ, got '" + value + "'");
    analysis_time = *t;
  } else if (key == "label_map") {
    if (value.empty()) label_map.reset();
    else label_map = fs::path(value);
  } else if (key == "ratings") {
    ratings.clear();
    for (auto& p : split_list(value)) ratings.emplace_back(p);
  } else if (key == "agreement_repository") {
    agreement_repository = value;
  } else if (key == "agreement_min_order") {
    agreement_min_order = parse_number<int>(key, value);
  } else if (key == "agreement_max_order") {
    agreement_max_order = parse_number<int>(key, value);
  } else if (key == "lowercase") {
    preprocess.lowercase = parse_bool(key, value);
  } else if (key == "remove_stopwords") {
    preprocess.remove_stopwords = parse_bool(key, value);
  } else if (key == "apply_stemming") {
    preprocess.apply_stemming = parse_bool(key, value);
  } else if (key == "stopwords") {
    if (value.empty()) stopwords_path.reset();
    else stopwords_path = fs::path(value);
  } else {
    fail(ErrorCode::config, "unknown config key '" + std::string(key) + "'");
  }
}

void PipelineConfig::validate() const {
  if (order < lm::kMinOrder || order > lm::kMaxOrder) {
    fail(ErrorCode::config, "order must be within 1..10 (got " + std::to_string(order) + ")");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorCode::config, "alpha must lie strictly between 0 and 1 (got " + std::to_string(alpha) + ")");
  }
  if (rate_limit < 1) fail(ErrorCode::config, "rate_limit must be at least 1 call per hour");
  if (min_issues < 0) fail(ErrorCode::config, "min_issues must not be negative");
  if (max_repositories < 1) fail(ErrorCode::config, "max_repositories must be at least 1");
  for (int o : {agreement_min_order, agreement_max_order}) {
    if (o < lm::kMinOrder || o > lm::kMaxOrder) {
      fail(ErrorCode::config, "agreement orders must be within 1..10 (got " + std::to_string(o) + ")");
    }
  }
  if (agreement_min_order > agreement_max_order) {
    fail(ErrorCode::config, "agreement_min_order exceeds agreement_max_order");
  }
  if (output_dir.empty()) fail(ErrorCode::config, "output_dir is empty");
}

std::string PipelineConfig::resolved() const {
  // output_dir is left out: the file lives there, and two runs into
  // different directories should produce the same bytes.
  std::map<std::string, std::string> kv;
  kv["agreement_max_order"] = std::to_string(agreement_max_order);
  kv["agreement_min_order"] = std::to_string(agreement_min_order);
  kv["agreement_repository"] = toml_string(agreement_repository);
  kv["alpha"] = [&] {
    // shortest text that reads back to the same double
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
      std::snprintf(buf, sizeof buf, "%.*g", prec, alpha);
      if (std::strtod(buf, nullptr) == alpha) break;
    }
    return std::string(buf);
  }();
  kv["analysis_time"] = toml_string(analysis_time ? analysis_time->iso8601() : "");
  kv["api_base"] = toml_string(api_base);
  kv["apply_stemming"] = bool_text(preprocess.apply_stemming);
  kv["archive"] = toml_string(archive_path.generic_string());
  kv["english_only"] = bool_text(english_only);
  kv["label_map"] = toml_string(label_map ? label_map->generic_string() : "");
  kv["lowercase"] = bool_text(preprocess.lowercase);
  kv["max_repositories"] = std::to_string(max_repositories);
  kv["min_issues"] = std::to_string(min_issues);
  kv["mode"] = toml_string(lm::to_string(mode));
  kv["order"] = std::to_string(order);
  kv["rate_limit"] = std::to_string(rate_limit);
  std::string list;
  for (const auto& p : ratings) list += (list.empty() ? "" : ",") + p.generic_string();
  kv["ratings"] = toml_string(list);
  kv["remove_stopwords"] = bool_text(preprocess.remove_stopwords);
  kv["stopwords"] = toml_string(stopwords_path ? stopwords_path->generic_string() : "");
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

void load_config_file(PipelineConfig& config, const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::config, "cannot open config file " + path.string());
  const fs::path base = path.parent_path();
  auto rebase = [&](const std::string& v) {
    if (v.empty()) return v;
    const fs::path p(v);
    return p.is_absolute() ? v : (base / p).lexically_normal().generic_string();
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto text = trim(line);
    if (text.empty() || text.front() == '#' || text.front() == '[') continue;
    const auto eq = text.find('=');
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) fail(ErrorCode::config, where + ": expected key = value");
    const std::string key(trim(text.substr(0, eq)));
    auto rest = trim(text.substr(eq + 1));
    // trailing comment outside quotes
    if (!rest.empty() && rest.front() != '"') {
      const auto hash = rest.find(" #");
      if (hash != std::string_view::npos) rest = trim(rest.substr(0, hash));
    }
    std::string value = unquote(rest);
    if (key == "archive" || key == "output_dir" || key == "label_map" || key == "stopwords") {
      value = rebase(value);
    } else if (key == "ratings") {
      std::string joined;
      for (const auto& p : split_list(value)) joined += (joined.empty() ? "" : ",") + rebase(p);
      value = joined;
    }
    try {
      config.set(key, value);
    } catch (const Error& e) {
      std::string msg = e.what();
      const std::string kind = std::string(to_string(e.code())) + ": ";
      if (msg.rfind(kind, 0) == 0) msg.erase(0, kind.size());
      fail(ErrorCode::config, where + ": " + msg);
    }
  }
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::preprocess: return "preprocess";
    case Stage::train: return "train";
    case Stage::score: return "score";
    case Stage::metrics: return "metrics";
    case Stage::analyze: return "analyze";
    case Stage::agreement: return "agreement";
    case Stage::run_all: return "run-all";
  }
  return "run-all";
}

std::optional<Stage> parse_stage(std::string_view name) {
  for (Stage s : {Stage::ingest, Stage::preprocess, Stage::train, Stage::score, Stage::metrics, Stage::analyze,
                  Stage::agreement, Stage::run_all}) {
    if (to_string(s) == name) return s;
  }
  if (name == "run_all") return Stage::run_all;
  return std::nullopt;
}

}  // namespace surprisal::pipeline
