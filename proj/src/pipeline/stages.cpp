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
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "surprisal/csv.hpp"
#include "surprisal/error.hpp"
#include "surprisal/hash.hpp"
#include "surprisal/ingest.hpp"
#include "surprisal/metrics.hpp"
#include "surprisal/pipeline.hpp"

namespace surprisal::pipeline {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Write to a sibling temp file, then rename, so that a crash never leaves a
// half-written output behind a valid stamp.
template <typename Fn>
void write_output(const fs::path& path, Fn&& fn) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write " + tmp.string());
    fn(out);
    out.flush();
    if (!out) fail(ErrorCode::io, "write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_text(const fs::path& path, const std::string& text) {
  write_output(path, [&](std::ostream& out) { out << text; });
}

std::string hex16(std::uint64_t v);

class Runner {
 public:
  Runner(const PipelineConfig& config, std::ostream* log) : cfg_(config), out_(config.output_dir), log_(log) {}

  StageResult run(Stage stage) {
    switch (stage) {
      case Stage::ingest: return ingest();
      case Stage::preprocess: return preprocess();
      case Stage::train: return train();
      case Stage::score: return score();
      case Stage::metrics: return metrics();
      case Stage::analyze: return analyze();
      case Stage::agreement: return agreement();
      case Stage::run_all: break;
    }
    fail(ErrorCode::internal, "run_all is not a single stage");
  }

 private:
  fs::path at(std::string_view name) const { return out_ / std::string(name); }

  void note(Stage s, const std::string& msg) const {
    if (log_) *log_ << to_string(s) << ": " << msg << '\n';
  }

  fs::path require_archive() const {
    if (cfg_.archive_path.empty()) fail(ErrorCode::config, "no archive configured (--archive or archive = ...)");
    if (!fs::is_directory(cfg_.archive_path)) {
      fail(ErrorCode::config, "archive not found: " + cfg_.archive_path.string());
    }
    return cfg_.archive_path;
  }

  fs::path require_input(std::string_view name, Stage producer) const {
    const auto p = at(name);
    if (!fs::exists(p)) {
      fail(ErrorCode::io, p.string() + " is missing; run `" + std::string(to_string(producer)) + "` first");
    }
    return p;
  }

  static void hash_archive(Fnv1a& h, const fs::path& dir) {
    for (const char* name : {"repos.jsonl", "issues.jsonl", "releases.jsonl", "meta.json"}) {
      h.field(name).field(read_file(dir / name));
    }
  }

  // Stamp = hash of input bytes and parameters. The stage is skipped when the
  // stored stamp matches and every output is still there.
  bool up_to_date(Stage s, const std::string& stamp, const std::vector<fs::path>& outputs) const {
    const auto file = out_ / std::string(kStampDir) / std::string(to_string(s));
    if (!fs::exists(file)) return false;
    if (read_file(file) != stamp + "\n") return false;
    for (const auto& o : outputs) {
      if (!fs::exists(o)) return false;
    }
    return true;
  }

  void save_stamp(Stage s, const std::string& stamp) const {
    const auto dir = out_ / std::string(kStampDir);
    fs::create_directories(dir);
    write_text(dir / std::string(to_string(s)), stamp + "\n");
  }

  StageResult skipped(Stage s, std::vector<fs::path> outputs) const {
    note(s, "inputs unchanged, skipped");
    return {s, true, std::move(outputs)};
  }

  textprep::PreprocessConfig effective_preprocess() const {
    auto pc = cfg_.preprocess;
    if (cfg_.stopwords_path) pc.stopwords = textprep::load_stopwords(*cfg_.stopwords_path);
    return pc;
  }

  StageResult ingest() {
    if (cfg_.archive_path.empty()) fail(ErrorCode::config, "no archive configured (--archive or archive = ...)");
    std::string token = cfg_.github_token;
    if (token.empty()) {
      if (const char* env = std::getenv("GITHUB_TOKEN")) token = env;
    }
    if (token.empty()) fail(ErrorCode::config, "ingest needs a token: set GITHUB_TOKEN or github_token");

    ingest::ClientOptions options;
    options.token = token;
    options.rate_limit = cfg_.rate_limit;
    options.user_agent = "surprisal/" + std::string(kToolVersion);
    ingest::GitHubClient client(options, ingest::make_http_transport(cfg_.api_base));

    Dataset data;
    data.analysis_time = cfg_.analysis_time.value_or(Timestamp::now());
    data.tool_version = std::string(kToolVersion);
    const auto top = client.fetch_top_repositories(cfg_.max_repositories);
    note(Stage::ingest, "fetched " + std::to_string(top.size()) + " repositories");
    const auto big = ingest::filter_repositories(top, cfg_.min_issues);
    note(Stage::ingest, std::to_string(big.size()) + " with at least " + std::to_string(cfg_.min_issues) + " issues");

    for (const auto& repo : big) {
      Dataset one;
      one.repositories.push_back(repo);
      client.fetch_issues(repo, [&](IssueRecord r) { one.issues.push_back(std::move(r)); });
      if (cfg_.english_only) {
        const auto kept = ingest::filter_repositories(one.repositories, 0, true, ingest::titles_from(one));
        if (kept.empty()) {
          note(Stage::ingest, repo.full_name + " dropped, titles not English");
          continue;
        }
      }
      one.releases = client.fetch_releases(repo);
      note(Stage::ingest, repo.full_name + ": " + std::to_string(one.issues.size()) + " items, " +
                              std::to_string(one.releases.size()) + " releases");
      data.repositories.push_back(repo);
      std::move(one.issues.begin(), one.issues.end(), std::back_inserter(data.issues));
      std::move(one.releases.begin(), one.releases.end(), std::back_inserter(data.releases));
    }
    ingest::save_archive(data, cfg_.archive_path);
    note(Stage::ingest, "archive written to " + cfg_.archive_path.string() + " (" +
                            std::to_string(client.calls_made()) + " API calls)");
    return {Stage::ingest, false, {cfg_.archive_path}};
  }

  StageResult preprocess() {
    const auto archive = require_archive();
    const auto pc = effective_preprocess();
    Fnv1a h;
    h.field("preprocess").field(std::to_string(pc.fingerprint()));
    hash_archive(h, archive);
    const std::vector<fs::path> outputs = {at(kTokensFile), at(kCorpusStatsFile)};
    if (up_to_date(Stage::preprocess, h.hex(), outputs)) return skipped(Stage::preprocess, outputs);

    auto data = ingest::load_archive(archive);
    std::sort(data.issues.begin(), data.issues.end(),
              [](const IssueRecord& a, const IssueRecord& b) { return a.key() < b.key(); });
    std::vector<TokenSequence> corpus;
    std::vector<std::string> empty;
    std::set<std::string> vocab, repos;
    std::size_t tokens = 0, issues = 0, prs = 0;
    for (const auto& issue : data.issues) {
      TokenSequence seq;
      try {
        seq = textprep::preprocess(issue, pc);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::empty_document) throw;
        seq.source = issue.key();
        seq.kind = issue.kind;
        seq.config_fingerprint = pc.fingerprint();
        empty.push_back(issue.key().str());
      }
      tokens += seq.tokens.size();
      vocab.insert(seq.tokens.begin(), seq.tokens.end());
      repos.insert(issue.repo);
      (issue.kind == IssueKind::issue ? issues : prs) += 1;
      corpus.push_back(std::move(seq));
    }
    fs::create_directories(out_);
    write_output(at(kTokensFile), [&](std::ostream& o) { textprep::write_token_dump(o, corpus); });

    nlohmann::ordered_json stats;
    stats["documents"] = corpus.size();
    stats["issues"] = issues;
    stats["pull_requests"] = prs;
    stats["repositories"] = repos.size();
    stats["tokens"] = tokens;
    stats["vocabulary"] = vocab.size();
    stats["empty_documents"] = empty;
    stats["preprocess"] = {{"lowercase", pc.lowercase},
                           {"remove_stopwords", pc.remove_stopwords},
                           {"apply_stemming", pc.apply_stemming},
                           {"stopword_count", pc.stopwords.size()},
                           {"fingerprint", hex16(pc.fingerprint())}};
    write_text(at(kCorpusStatsFile), stats.dump(1) + "\n");
    save_stamp(Stage::preprocess, h.hex());
    note(Stage::preprocess, std::to_string(corpus.size()) + " documents, " + std::to_string(tokens) + " tokens, " +
                                std::to_string(empty.size()) + " empty");
    return {Stage::preprocess, false, outputs};
  }

  StageResult train() {
    const auto tokens = require_input(kTokensFile, Stage::preprocess);
    Fnv1a h;
    h.field("train").field(std::to_string(cfg_.order)).field(read_file(tokens));
    const std::vector<fs::path> outputs = {at(kModelFile)};
    if (up_to_date(Stage::train, h.hex(), outputs)) return skipped(Stage::train, outputs);

    const auto corpus = textprep::load_token_dump(tokens);
    const auto model = lm::KneserNeyModel::train(corpus, cfg_.order);
    write_output(at(kModelFile), [&](std::ostream& o) { model.write(o); });
    save_stamp(Stage::train, h.hex());
    note(Stage::train, "order " + std::to_string(cfg_.order) + ", vocabulary " +
                           std::to_string(model.counts().vocabulary().size()) + ", " +
                           std::to_string(model.counts().total_tokens()) + " tokens");
    return {Stage::train, false, outputs};
  }

  StageResult score() {
    const auto tokens = require_input(kTokensFile, Stage::preprocess);
    const auto model_file = require_input(kModelFile, Stage::train);
    Fnv1a h;
    h.field("score").field(lm::to_string(cfg_.mode)).field(read_file(tokens)).field(read_file(model_file));
    const std::vector<fs::path> outputs = {at(kScoresFile)};
    if (up_to_date(Stage::score, h.hex(), outputs)) return skipped(Stage::score, outputs);

    const auto model = lm::KneserNeyModel::load(model_file);
    const auto corpus = textprep::load_token_dump(tokens);
    const auto scores = lm::score_corpus(model, corpus, cfg_.mode);
    write_output(at(kScoresFile), [&](std::ostream& o) { write_scores_csv(o, scores); });
    save_stamp(Stage::score, h.hex());
    note(Stage::score, std::to_string(scores.size()) + " documents scored (" + std::string(lm::to_string(cfg_.mode)) +
                           ")");
    return {Stage::score, false, outputs};
  }

  StageResult metrics() {
    const auto archive = require_archive();
    Fnv1a h;
    h.field("metrics");
    hash_archive(h, archive);
    h.field(cfg_.analysis_time ? cfg_.analysis_time->iso8601() : "");
    h.field(cfg_.label_map ? read_file(*cfg_.label_map) : "");
    std::vector<fs::path> outputs = {at(kMetricsFile)};
    if (!cfg_.label_map) outputs.push_back(at(kLabelDraftFile));
    if (up_to_date(Stage::metrics, h.hex(), outputs)) return skipped(Stage::metrics, outputs);

    const auto data = ingest::load_archive(archive);
    const auto when = cfg_.analysis_time ? cfg_.analysis_time : data.analysis_time;
    if (!when) fail(ErrorCode::config, "no analysis_time in the archive metadata or the config");

    metrics::LabelMap labels;
    fs::create_directories(out_);
    if (cfg_.label_map) {
      labels = metrics::load_label_map(*cfg_.label_map);
    } else {
      std::set<std::string> seen;
      for (const auto& issue : data.issues) seen.insert(issue.labels.begin(), issue.labels.end());
      const auto draft = metrics::suggest_label_map(seen);
      write_output(at(kLabelDraftFile), [&](std::ostream& o) { metrics::write_label_map(o, draft); });
      note(Stage::metrics, "no label_map configured; importance left empty, review " +
                               std::string(kLabelDraftFile) + " and pass it as label_map");
    }
    const auto rows = metrics::compute_all_metrics(data, labels, *when);
    write_output(at(kMetricsFile), [&](std::ostream& o) { metrics::write_metrics_csv(o, rows); });
    save_stamp(Stage::metrics, h.hex());
    note(Stage::metrics, std::to_string(rows.size()) + " rows at analysis time " + when->iso8601());
    return {Stage::metrics, false, outputs};
  }

  StageResult analyze() {
    const auto scores_file = require_input(kScoresFile, Stage::score);
    const auto metrics_file = require_input(kMetricsFile, Stage::metrics);
    std::ostringstream alpha;
    alpha.precision(17);
    alpha << cfg_.alpha;
    Fnv1a h;
    h.field("analyze").field(alpha.str()).field(read_file(scores_file)).field(read_file(metrics_file));
    const std::vector<fs::path> outputs = {at(kReportJson), at(kReportMd)};
    if (up_to_date(Stage::analyze, h.hex(), outputs)) return skipped(Stage::analyze, outputs);

    std::ifstream s_in(scores_file, std::ios::binary), m_in(metrics_file, std::ios::binary);
    const auto scores = read_scores_csv(s_in);
    const auto rows = metrics::read_metrics_csv(m_in);
    const auto suite = stats::run_hypothesis_suite(scores, rows, cfg_.alpha);
    write_output(at(kReportJson), [&](std::ostream& o) { write_report_json(o, suite); });
    write_output(at(kReportMd), [&](std::ostream& o) { write_report_markdown(o, suite); });
    save_stamp(Stage::analyze, h.hex());
    std::size_t rejected = 0;
    for (const auto& o : suite.outcomes) rejected += o.decision == stats::Decision::reject_null;
    note(Stage::analyze, std::to_string(suite.outcomes.size()) + " correlation tests, " + std::to_string(rejected) +
                             " reject the null");
    return {Stage::analyze, false, outputs};
  }

  StageResult agreement() {
    if (cfg_.ratings.empty()) fail(ErrorCode::config, "agreement needs ratings = <file>[,<file>...]");
    if (cfg_.agreement_repository.empty()) fail(ErrorCode::config, "agreement needs agreement_repository");
    const auto tokens = require_input(kTokensFile, Stage::preprocess);
    Fnv1a h;
    h.field("agreement").field(cfg_.agreement_repository);
    h.field(std::to_string(cfg_.agreement_min_order)).field(std::to_string(cfg_.agreement_max_order));
    h.field(read_file(tokens));
    for (const auto& r : cfg_.ratings) h.field(read_file(r));
    const std::vector<fs::path> outputs = {at(kAgreementJson), at(kAgreementMd)};
    if (up_to_date(Stage::agreement, h.hex(), outputs)) return skipped(Stage::agreement, outputs);

    const auto ratings = stats::load_ratings(cfg_.ratings);
    const auto corpus = textprep::load_token_dump(tokens);
    stats::AgreementOptions options;
    options.min_order = cfg_.agreement_min_order;
    options.max_order = cfg_.agreement_max_order;
    const auto report = stats::model_agreement_experiment(ratings, corpus, cfg_.agreement_repository, options);
    write_output(at(kAgreementJson), [&](std::ostream& o) { write_agreement_json(o, report); });
    write_output(at(kAgreementMd), [&](std::ostream& o) { write_agreement_markdown(o, report); });
    save_stamp(Stage::agreement, h.hex());
    note(Stage::agreement, "kappa " + std::to_string(report.kappa) + " over " + std::to_string(report.sample.size()) +
                               " issues, " + std::to_string(report.cells.size()) + " cells");
    return {Stage::agreement, false, outputs};
  }

  const PipelineConfig& cfg_;
  fs::path out_;
  std::ostream* log_;
};

std::string hex16(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) fail(ErrorCode::schema, where + ": '" + s + "' is not a number");
  return v;
}

}  // namespace

std::vector<StageResult> run_stage(Stage stage, const PipelineConfig& config, std::ostream* log) {
  config.validate();
  std::vector<Stage> plan;
  if (stage == Stage::run_all) {
    // Fail on a missing archive before anything is written.
    if (config.archive_path.empty()) fail(ErrorCode::config, "no archive configured (--archive or archive = ...)");
    if (!fs::is_directory(config.archive_path)) {
      fail(ErrorCode::config, "archive not found: " + config.archive_path.string());
    }
    plan = {Stage::preprocess, Stage::train, Stage::score, Stage::metrics, Stage::analyze};
    if (!config.ratings.empty()) plan.push_back(Stage::agreement);
  } else {
    plan = {stage};
  }
  if (stage != Stage::ingest) {
    fs::create_directories(config.output_dir);
    const auto resolved = config.output_dir / std::string(kResolvedConfig);
    const auto text = config.resolved();
    if (!fs::exists(resolved) || read_file(resolved) != text) write_text(resolved, text);
  }
  Runner runner(config, log);
  std::vector<StageResult> results;
  for (Stage s : plan) results.push_back(runner.run(s));
  return results;
}

void write_scores_csv(std::ostream& out, std::span<const lm::SurprisalScore> scores) {
  static const std::vector<std::string> kHeader = {"repo",     "number",        "kind",         "bits_per_token",
                                                   "token_count", "mode",       "min_word_bits", "max_word_bits"};
  csv::write_row(out, kHeader);
  for (const auto& s : scores) {
    const std::vector<std::string> row = {s.source.repo,
                                          std::to_string(s.source.number),
                                          std::string(to_string(s.kind)),
                                          format_double(s.cross_entropy_bits_per_token),
                                          std::to_string(s.token_count),
                                          std::string(lm::to_string(s.mode)),
                                          format_double(s.min_word_bits),
                                          format_double(s.max_word_bits)};
    csv::write_row(out, row);
  }
}

std::vector<lm::SurprisalScore> read_scores_csv(std::istream& in) {
  static constexpr std::string_view kCols[] = {"repo", "number", "kind", "bits_per_token",
                                               "token_count", "mode", "min_word_bits", "max_word_bits"};
  const auto table = csv::read_table(in, kCols, kScoresFile);
  std::vector<lm::SurprisalScore> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = std::string(kScoresFile) + ":" + std::to_string(table.lines[i]);
    lm::SurprisalScore s;
    s.source.repo = row[0];
    const auto key = IssueKey::parse(row[0] + "#" + row[1]);
    if (!key) fail(ErrorCode::schema, where + ": bad repo/number");
    s.source = *key;
    const auto kind = parse_issue_kind(row[2]);
    if (!kind) fail(ErrorCode::schema, where + ": unknown kind '" + row[2] + "'");
    s.kind = *kind;
    s.cross_entropy_bits_per_token = parse_double(row[3], where);
    const double count = parse_double(row[4], where);
    if (count < 0 || count != std::floor(count)) fail(ErrorCode::schema, where + ": bad token_count");
    s.token_count = static_cast<std::size_t>(count);
    const auto mode = lm::parse_score_mode(row[5]);
    if (!mode) fail(ErrorCode::schema, where + ": unknown mode '" + row[5] + "'");
    s.mode = *mode;
    s.min_word_bits = parse_double(row[6], where);
    s.max_word_bits = parse_double(row[7], where);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace surprisal::pipeline
