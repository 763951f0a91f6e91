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

#ifndef SURPRISAL_STATS_HPP
#define SURPRISAL_STATS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surprisal/lm.hpp"
#include "surprisal/metrics.hpp"
#include "surprisal/records.hpp"
#include "surprisal/token_sequence.hpp"

namespace surprisal::stats {

/// Finite values with a name. Construction rejects NaN and infinities.
class Series {
 public:
  Series() = default;
  Series(std::vector<double> values, std::string label = {});

  const std::vector<double>& values() const { return values_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  std::string label_;
};

struct Descriptive {
  std::size_t n = 0;
  double mean = 0, sd = 0, min = 0, max = 0;  // sd uses n-1
};

/// Throws SampleSizeError for an empty sample.
Descriptive descriptive(std::span<const double> values);

struct TestResult {
  double statistic = 0;
  double p_value = 1;
  std::string test_name;
  std::size_t n = 0;
};

inline constexpr std::size_t kShapiroMinN = 3;
inline constexpr std::size_t kShapiroMaxN = 5000;

/// W and its p-value (Royston's approximation). Needs 3 <= n <= 5000 and a
/// non-zero range.
TestResult shapiro_wilk(std::span<const double> x);

/// Two-sided p-values throughout.
TestResult pearson(std::span<const double> x, std::span<const double> y);
/// Exact permutation p-value for n < 10 without ties, t approximation
/// otherwise.
TestResult spearman(std::span<const double> x, std::span<const double> y);
/// tau-b. Exact p-value for n < 10 without ties, normal approximation
/// otherwise.
TestResult kendall_tau(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kExactBelow = 10;

/// 1-based ranks with ties averaged.
std::vector<double> average_ranks(std::span<const double> x);

/// Two raters over the same items. Identical vectors give 1 even when the
/// expected agreement is 1.
double cohens_kappa(std::span<const std::int64_t> r1, std::span<const std::int64_t> r2);

inline constexpr double kKappaGate = 0.7;
inline bool kappa_gate(double kappa, double threshold = kKappaGate) { return kappa >= threshold; }

// ---------------------------------------------------------------------------
// Regression. Predictors are columns; an intercept is always added first.

struct OlsResult {
  std::vector<std::string> names;  // "intercept" then predictor names
  std::vector<double> coefficients;
  std::vector<double> residuals;
  double r2 = 0;
  double f = 0;  // overall F against the intercept-only model
  double p = 1;
  double rss = 0;
  std::size_t n = 0;
  std::size_t df_model = 0;  // predictors excluding the intercept
  std::size_t df_resid = 0;
};

/// Throws RankDeficient for exactly collinear columns and SampleSizeError
/// when there are fewer rows than coefficients plus one.
OlsResult ols_regression(std::span<const std::vector<double>> predictors, std::span<const double> y,
                         std::span<const std::string> names = {});

/// F test of the full model against a nested null model on the same data.
TestResult nested_f_test(const OlsResult& null_model, const OlsResult& full_model);

/// Variance inflation factor per predictor column.
std::vector<double> vif(std::span<const std::vector<double>> predictors);

// ---------------------------------------------------------------------------
// Hypothesis suite

enum class Stratum { issues, pull_requests };
enum class Decision { reject_null, fail_to_reject, not_testable };

std::string_view to_string(Stratum s);
std::string_view to_string(Decision d);

struct HypothesisOutcome {
  std::string hypothesis_id;  // e.g. "RQ2.H1"
  std::string table_label;    // the label used for the same test in the variable table
  std::string predictor = "surprisal";
  std::string response;
  Stratum stratum = Stratum::issues;
  std::optional<TestResult> normality_predictor;
  std::optional<TestResult> normality_response;
  std::optional<TestResult> correlation;
  // The correlation the selection rule did not pick; reported only.
  std::optional<TestResult> other_correlation;
  Decision decision = Decision::not_testable;
  std::string note;
};

struct RegressionOutcome {
  std::string hypothesis_id;  // "RQ2.H5" / "RQ3.H5"
  Stratum stratum = Stratum::issues;
  std::string null_predictor;  // chosen significant difficulty measure
  std::optional<OlsResult> null_model;
  std::optional<OlsResult> full_model;
  std::optional<TestResult> f_test;
  std::map<std::string, double> vif;
  Decision decision = Decision::not_testable;
  std::string note;
};

struct DescriptiveRow {
  std::string variable;
  Stratum stratum = Stratum::issues;
  Descriptive d;
};

struct SuiteResult {
  double alpha = 0.05;
  std::vector<DescriptiveRow> descriptives;
  std::vector<HypothesisOutcome> outcomes;
  std::vector<RegressionOutcome> regressions;
};

/// Joins scores and metrics on the issue key and tests every hypothesis per
/// stratum. Deterministic.
SuiteResult run_hypothesis_suite(std::span<const lm::SurprisalScore> scores,
                                 std::span<const metrics::IssueMetrics> metrics, double alpha = 0.05);

// ---------------------------------------------------------------------------
// Model agreement experiment

struct RatingFile {
  std::string rater_id;
  std::map<IssueKey, int> ratings;  // 1..5
};

/// CSV "rater_id,issue_id,rating" with issue ids as "owner/name#number".
/// Rows may mix raters; one RatingFile per rater, sorted by rater id.
std::vector<RatingFile> read_ratings(std::istream& in, std::string_view what = "ratings.csv");
std::vector<RatingFile> load_ratings(const std::filesystem::path& path);
/// Several files merged; a rater may span files but not rate an issue twice.
std::vector<RatingFile> load_ratings(std::span<const std::filesystem::path> paths);

enum class Variant { full, minus_repository, leave_one_issue_out };
std::string_view to_string(Variant v);
inline constexpr Variant kVariants[] = {Variant::full, Variant::minus_repository,
                                        Variant::leave_one_issue_out};

struct Disagreement {
  IssueKey issue;
  double model_rank = 0, human_rank = 0;
  double distance = 0;
};

struct AgreementCell {
  Variant variant = Variant::full;
  int order = 3;
  TestResult kendall;
  std::vector<Disagreement> disagreements;  // top quartile by rank distance
};

struct RaterDisagreement {
  IssueKey issue;
  std::vector<int> ratings;  // per rater, in rater order
};

struct AgreementReport {
  std::string repository;
  std::vector<std::string> raters;
  std::vector<IssueKey> sample;  // rated by every rater and present in the corpus
  double kappa = 0;              // mean over rater pairs
  bool kappa_gate_passed = false;
  std::vector<RaterDisagreement> rater_disagreements;
  std::vector<AgreementCell> cells;  // variant-major, orders ascending
};

struct AgreementOptions {
  int min_order = 1;
  int max_order = 10;
  lm::TrainOptions train;
};

/// Throws InsufficientRatings for fewer than two raters or an empty sample.
AgreementReport model_agreement_experiment(std::span<const RatingFile> ratings,
                                           std::span<const TokenSequence> corpus,
                                           const std::string& repository,
                                           const AgreementOptions& options = {});

}  // namespace surprisal::stats

#endif  // SURPRISAL_STATS_HPP
