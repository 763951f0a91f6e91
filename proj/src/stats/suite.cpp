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
#include <functional>
#include <map>

#include "surprisal/error.hpp"
#include "surprisal/stats.hpp"

namespace surprisal::stats {

namespace {

using metrics::IssueMetrics;

struct Response {
  const char* name;
  int hypothesis;  // within its research question
  bool ordinal;
  bool difficulty;
  std::function<std::optional<double>(const IssueMetrics&)> get;
};

const std::vector<Response>& responses() {
  static const std::vector<Response> table = {
      {"reopenings", 1, false, true, [](const IssueMetrics& m) { return std::optional<double>(m.reopenings); }},
      {"participants", 2, false, true, [](const IssueMetrics& m) { return std::optional<double>(m.participants); }},
      {"interactions", 3, false, true, [](const IssueMetrics& m) { return std::optional<double>(m.interactions); }},
      {"open_state_duration", 4, false, true,
       [](const IssueMetrics& m) { return std::optional<double>(m.open_state_duration); }},
      {"release_mentions", 1, false, false,
       [](const IssueMetrics& m) { return std::optional<double>(m.release_mentions); }},
      {"order_of_address", 2, true, false,
       [](const IssueMetrics& m) -> std::optional<double> {
         if (!m.order_of_address) return std::nullopt;
         return static_cast<double>(*m.order_of_address);
       }},
      {"reactions", 3, false, false, [](const IssueMetrics& m) { return std::optional<double>(m.reactions); }},
      {"importance", 4, true, false,
       [](const IssueMetrics& m) -> std::optional<double> {
         if (!m.importance) return std::nullopt;
         return static_cast<double>(static_cast<int>(*m.importance) + 1);
       }},
  };
  return table;
}

// RQ2/RQ4 cover issues, RQ3/RQ5 their pull request mirrors. The variable
// table labels the same tests H1.x (difficulty) and H3.x (importance), the
// research question text H2.x and H4.x.
std::string hypothesis_id(const Response& r, Stratum s) {
  const int rq = (r.difficulty ? 2 : 4) + (s == Stratum::pull_requests ? 1 : 0);
  return "RQ" + std::to_string(rq) + ".H" + std::to_string(r.hypothesis);
}

std::string table_label(const Response& r, Stratum s) {
  const std::string h = std::to_string(r.hypothesis);
  std::string label = r.difficulty ? "H2." + h + " (table: H1." + h + ")" : "H4." + h + " (table: H3." + h + ")";
  if (s == Stratum::pull_requests) label += ", pull requests";
  return label;
}

std::optional<TestResult> try_normality(std::span<const double> v) {
  try {
    return shapiro_wilk(v);
  } catch (const Error&) {
    return std::nullopt;
  }
}

HypothesisOutcome test_one(const Response& r, Stratum stratum, std::span<const double> x,
                           std::span<const double> y, double alpha) {
  HypothesisOutcome o;
  o.hypothesis_id = hypothesis_id(r, stratum);
  o.table_label = table_label(r, stratum);
  o.response = r.name;
  o.stratum = stratum;
  if (x.size() < 3) {
    o.note = "fewer than 3 paired observations";
    return o;
  }
  o.normality_predictor = try_normality(x);
  o.normality_response = try_normality(y);
  const bool normal = o.normality_predictor && o.normality_predictor->p_value >= alpha &&
                      o.normality_response && o.normality_response->p_value >= alpha;
  const bool use_pearson = normal && !r.ordinal;
  try {
    o.correlation = use_pearson ? pearson(x, y) : spearman(x, y);
  } catch (const Error& e) {
    o.note = e.what();
    return o;
  }
  if (!r.ordinal) {
    try {
      o.other_correlation = use_pearson ? spearman(x, y) : pearson(x, y);
    } catch (const Error&) {
    }
  }
  o.decision = o.correlation->p_value < alpha ? Decision::reject_null : Decision::fail_to_reject;
  if (r.ordinal) o.note = "ordinal response: rank-based test";
  else if (!o.normality_predictor || !o.normality_response) o.note = "normality not testable; rank-based test";
  return o;
}

RegressionOutcome regress(Stratum stratum, const std::vector<double>& surprisal,
                          const std::map<std::string, std::vector<double>>& difficulty,
                          const std::vector<HypothesisOutcome>& outcomes, double alpha) {
  RegressionOutcome r;
  r.hypothesis_id = stratum == Stratum::issues ? "RQ2.H5" : "RQ3.H5";
  r.stratum = stratum;

  // The null model holds the most significant single difficulty measure.
  const HypothesisOutcome* best = nullptr;
  for (const auto& o : outcomes) {
    if (o.stratum != stratum || o.decision != Decision::reject_null) continue;
    const auto& resp = responses();
    const auto it = std::find_if(resp.begin(), resp.end(), [&](const Response& x) { return o.response == x.name; });
    if (it == resp.end() || !it->difficulty) continue;
    if (!best || o.correlation->p_value < best->correlation->p_value) best = &o;
  }
  if (!best) {
    r.note = "no difficulty measure is significant on its own, so there is no null model";
    return r;
  }
  r.null_predictor = best->response;

  std::vector<std::vector<double>> all;
  std::vector<std::string> names;
  for (const auto& resp : responses()) {
    if (!resp.difficulty) continue;
    all.push_back(difficulty.at(resp.name));
    names.push_back(resp.name);
  }
  try {
    const std::vector<std::vector<double>> one = {difficulty.at(r.null_predictor)};
    const std::vector<std::string> one_name = {r.null_predictor};
    r.null_model = ols_regression(one, surprisal, one_name);
    r.full_model = ols_regression(all, surprisal, names);
    r.f_test = nested_f_test(*r.null_model, *r.full_model);
  } catch (const Error& e) {
    r.note = e.what();
    r.null_model.reset();
    r.full_model.reset();
    return r;
  }
  try {
    const auto v = vif(all);
    for (std::size_t j = 0; j < names.size(); ++j) r.vif[names[j]] = v[j];
  } catch (const Error&) {
  }
  // As planned: a non-significant F accepts the alternative (the combined
  // difficulty model adds nothing over the single measure).
  r.decision = r.f_test->p_value >= alpha ? Decision::reject_null : Decision::fail_to_reject;
  r.note = "decision rule inverted as in the analysis plan: F not significant -> alternative accepted";
  return r;
}

}  // namespace

std::string_view to_string(Stratum s) { return s == Stratum::issues ? "issues" : "pull_requests"; }

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::reject_null: return "reject_null";
    case Decision::fail_to_reject: return "fail_to_reject";
    case Decision::not_testable: return "not_testable";
  }
  return "not_testable";
}

SuiteResult run_hypothesis_suite(std::span<const lm::SurprisalScore> scores,
                                 std::span<const IssueMetrics> metrics, double alpha) {
  if (!(alpha > 0 && alpha < 1)) fail(ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
  std::map<IssueKey, double> by_key;
  for (const auto& s : scores) {
    if (!std::isfinite(s.cross_entropy_bits_per_token)) continue;
    by_key[s.source] = s.cross_entropy_bits_per_token;
  }

  SuiteResult out;
  out.alpha = alpha;
  for (Stratum stratum : {Stratum::issues, Stratum::pull_requests}) {
    const IssueKind kind = stratum == Stratum::issues ? IssueKind::issue : IssueKind::pull_request;
    std::vector<const IssueMetrics*> rows;
    for (const auto& m : metrics) {
      if (m.kind == kind && by_key.count(m.source)) rows.push_back(&m);
    }
    std::sort(rows.begin(), rows.end(), [](const IssueMetrics* a, const IssueMetrics* b) { return a->source < b->source; });

    std::vector<double> surprisal;
    for (const auto* m : rows) surprisal.push_back(by_key.at(m->source));
    if (!surprisal.empty()) out.descriptives.push_back({"surprisal", stratum, descriptive(surprisal)});

    std::map<std::string, std::vector<double>> difficulty;
    std::vector<HypothesisOutcome> stratum_outcomes;
    for (const auto& resp : responses()) {
      std::vector<double> x, y;
      for (const auto* m : rows) {
        if (auto v = resp.get(*m)) {
          x.push_back(by_key.at(m->source));
          y.push_back(*v);
        }
      }
      if (!y.empty()) out.descriptives.push_back({resp.name, stratum, descriptive(y)});
      if (resp.difficulty) difficulty[resp.name] = y;
      stratum_outcomes.push_back(test_one(resp, stratum, x, y, alpha));
    }
    out.regressions.push_back(regress(stratum, surprisal, difficulty, stratum_outcomes, alpha));
    out.outcomes.insert(out.outcomes.end(), stratum_outcomes.begin(), stratum_outcomes.end());
  }
  return out;
}

}  // namespace surprisal::stats
