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

#ifndef SURPRISAL_PIPELINE_HPP
#define SURPRISAL_PIPELINE_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surprisal/lm.hpp"
#include "surprisal/stats.hpp"
#include "surprisal/textprep.hpp"
#include "surprisal/timestamp.hpp"

namespace surprisal::pipeline {

inline constexpr std::string_view kToolVersion = "0.3.0";

struct PipelineConfig {
  std::filesystem::path archive_path;
  std::filesystem::path output_dir = "out";
  int order = 3;
  textprep::PreprocessConfig preprocess = textprep::PreprocessConfig::defaults();
  std::optional<std::filesystem::path> stopwords_path;
  lm::ScoreMode mode = lm::ScoreMode::conditional_ngram;
  double alpha = 0.05;
  int rate_limit = 5000;
  int min_issues = 1000;
  int max_repositories = 5000;
  bool english_only = true;
  std::string github_token;  // never written to the resolved config
  std::string api_base = "https://api.github.com";
  std::optional<Timestamp> analysis_time;
  std::optional<std::filesystem::path> label_map;
  std::vector<std::filesystem::path> ratings;
  std::string agreement_repository;
  int agreement_min_order = 1;
  int agreement_max_order = 10;

  /// Applies one "key = value" setting. Throws ConfigError naming the key.
  void set(std::string_view key, std::string_view value);
  /// Checks cross-field constraints (order bounds, alpha range, ...).
  void validate() const;
  /// Resolved settings, one "key = value" per line, sorted by key.
  std::string resolved() const;
};

/// TOML-style subset: "key = value" lines, '#' comments, optional double
/// quotes around values. Relative paths are taken relative to the file.
void load_config_file(PipelineConfig& config, const std::filesystem::path& path);

enum class Stage { ingest, preprocess, train, score, metrics, analyze, agreement, run_all };

std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

struct StageResult {
  Stage stage = Stage::preprocess;
  bool skipped = false;  // inputs unchanged since the last run
  std::vector<std::filesystem::path> outputs;
};

/// Runs one stage (run_all: preprocess through analyze, plus agreement when
/// ratings are configured). Each stage writes its outputs before returning
/// and is skipped when its input stamp is unchanged.
std::vector<StageResult> run_stage(Stage stage, const PipelineConfig& config, std::ostream* log = nullptr);

// Output file names inside output_dir.
inline constexpr std::string_view kTokensFile = "tokens.txt";
inline constexpr std::string_view kCorpusStatsFile = "corpus_stats.json";
inline constexpr std::string_view kModelFile = "model.tsv";
inline constexpr std::string_view kScoresFile = "scores.csv";
inline constexpr std::string_view kMetricsFile = "metrics.csv";
inline constexpr std::string_view kLabelDraftFile = "label_map.draft.csv";
inline constexpr std::string_view kReportJson = "report.json";
inline constexpr std::string_view kReportMd = "report.md";
inline constexpr std::string_view kAgreementJson = "agreement.json";
inline constexpr std::string_view kAgreementMd = "agreement.md";
inline constexpr std::string_view kResolvedConfig = "config.resolved.toml";
inline constexpr std::string_view kStampDir = ".stamps";

void write_scores_csv(std::ostream& out, std::span<const lm::SurprisalScore> scores);
std::vector<lm::SurprisalScore> read_scores_csv(std::istream& in);

// Reports. Numbers are written with full precision in JSON and four
// significant decimals in Markdown; no timestamps, so reruns are identical.
void write_report_json(std::ostream& out, const stats::SuiteResult& suite);
void write_report_markdown(std::ostream& out, const stats::SuiteResult& suite);
void write_agreement_json(std::ostream& out, const stats::AgreementReport& report);
void write_agreement_markdown(std::ostream& out, const stats::AgreementReport& report);

}  // namespace surprisal::pipeline

#endif  // SURPRISAL_PIPELINE_HPP
