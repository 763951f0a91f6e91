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
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "surprisal/error.hpp"
#include "surprisal/stats.hpp"
#include "surprisal/textprep.hpp"

using namespace surprisal;
using namespace surprisal::stats;
using nlohmann::json;

namespace {

const json& oracle() {
  static const json j = [] {
    std::ifstream in(std::string(SURPRISAL_TEST_DATA) + "/stats_oracle.json");
    return json::parse(in);
  }();
  return j;
}

std::vector<double> vec(const json& j) { return j.get<std::vector<double>>(); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

}  // namespace

TEST(Descriptive, Examples) {
  const auto a = descriptive(std::vector<double>{2, 2, 2});
  EXPECT_EQ(a.n, 3u);
  EXPECT_EQ(a.mean, 2);
  EXPECT_EQ(a.sd, 0);
  EXPECT_EQ(a.min, 2);
  EXPECT_EQ(a.max, 2);
  const auto b = descriptive(std::vector<double>{1, 2, 3, 4});
  EXPECT_EQ(b.mean, 2.5);
  EXPECT_NEAR(b.sd, 1.2910, 5e-5);
  EXPECT_EQ(b.min, 1);
  EXPECT_EQ(b.max, 4);
  EXPECT_EQ(code_of([] { descriptive(std::vector<double>{}); }), ErrorCode::sample_size);
}

TEST(SeriesTest, RejectsNonFinite) {
  EXPECT_EQ(code_of([] { Series({1.0, NAN}, "x"); }), ErrorCode::domain);
  EXPECT_EQ(code_of([] { Series({1.0, INFINITY}, "x"); }), ErrorCode::domain);
  EXPECT_EQ(Series({1.0, 2.0}, "x").size(), 2u);
}

TEST(ShapiroWilk, MatchesOracle) {
  for (const auto& c : oracle()["shapiro"]) {
    const auto x = vec(c["x"]);
    const auto r = shapiro_wilk(x);
    SCOPED_TRACE("n=" + std::to_string(x.size()));
    EXPECT_NEAR(r.statistic, c["w"].get<double>(), 1e-4);
    EXPECT_NEAR(r.p_value, c["p"].get<double>(), 1e-4);
    EXPECT_EQ(r.n, x.size());
  }
}

TEST(ShapiroWilk, Edges) {
  EXPECT_EQ(code_of([] { shapiro_wilk(std::vector<double>{1, 2}); }), ErrorCode::sample_size);
  EXPECT_EQ(code_of([] { shapiro_wilk(std::vector<double>(5001, 1.0)); }), ErrorCode::sample_size);
  EXPECT_EQ(code_of([] { shapiro_wilk(std::vector<double>{3, 3, 3, 3}); }), ErrorCode::domain);
  // normal quantiles, n=50
  const auto q = vec(oracle()["shapiro"].back()["x"]);
  ASSERT_EQ(q.size(), 50u);
  EXPECT_GT(shapiro_wilk(q).statistic, 0.99);
}

TEST(Pearson, MatchesOracle) {
  for (const auto& c : oracle()["pearson"]) {
    const auto r = pearson(vec(c["x"]), vec(c["y"]));
    EXPECT_NEAR(r.statistic, c["r"].get<double>(), 1e-6);
    EXPECT_NEAR(r.p_value, c["p"].get<double>(), 1e-6);
  }
}

TEST(Pearson, PerfectLines) {
  const std::vector<double> x = {1, 2, 3, 4, 5, 6};
  std::vector<double> y, z;
  for (double v : x) {
    y.push_back(2 * v + 1);
    z.push_back(-v);
  }
  EXPECT_DOUBLE_EQ(pearson(x, y).statistic, 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, z).statistic, -1.0);
  EXPECT_EQ(pearson(x, y).p_value, 0.0);
  EXPECT_EQ(code_of([&] { pearson(x, std::vector<double>(6, 1.0)); }), ErrorCode::domain);
  EXPECT_EQ(code_of([] { pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }), ErrorCode::sample_size);
}

TEST(Spearman, MatchesOracle) {
  for (const auto& c : oracle()["spearman"]) {
    const auto r = spearman(vec(c["x"]), vec(c["y"]));
    EXPECT_NEAR(r.statistic, c["rho"].get<double>(), 1e-9);
    EXPECT_NEAR(r.p_value, c["p"].get<double>(), 1e-6);
  }
  const auto& e = oracle()["spearman_exact"];
  const auto r = spearman(vec(e["x"]), vec(e["y"]));
  EXPECT_NEAR(r.statistic, e["rho"].get<double>(), 1e-9);
  EXPECT_NEAR(r.p_value, e["p"].get<double>(), 1e-9);
}

TEST(Spearman, MonotoneAndReversed) {
  const std::vector<double> x = {0.5, 1, 2, 3.5, 7, 8, 12, 20, 21, 30, 31};
  std::vector<double> up, down;
  for (double v : x) {
    up.push_back(std::exp(v / 10));
    down.push_back(-v * v);
  }
  EXPECT_DOUBLE_EQ(spearman(x, up).statistic, 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, down).statistic, -1.0);
}

TEST(Kendall, MatchesOracle) {
  for (const auto& c : oracle()["kendall"]) {
    const auto r = kendall_tau(vec(c["x"]), vec(c["y"]));
    EXPECT_NEAR(r.statistic, c["tau"].get<double>(), 1e-9);
    EXPECT_NEAR(r.p_value, c["p"].get<double>(), 1e-6);
  }
  const auto& e = oracle()["kendall_exact"];
  const auto r = kendall_tau(vec(e["x"]), vec(e["y"]));
  EXPECT_NEAR(r.statistic, e["tau"].get<double>(), 1e-12);
  EXPECT_NEAR(r.p_value, e["p"].get<double>(), 1e-12);
}

TEST(Kendall, WorkedExample) {
  const std::vector<double> a = {1, 2, 3, 4, 5}, b = {1, 3, 2, 5, 4};
  EXPECT_EQ(kendall_tau(a, b).statistic, 0.6);
  EXPECT_EQ(kendall_tau(a, a).statistic, 1.0);
  const std::vector<double> rev = {5, 4, 3, 2, 1};
  EXPECT_EQ(kendall_tau(a, rev).statistic, -1.0);
}

TEST(Correlations, Invariants) {
  std::mt19937 rng(99);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> small(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + trial;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = trial % 2 ? small(rng) : nd(rng);
      y[i] = x[i] * 0.5 + nd(rng);
    }
    for (auto f : {pearson, spearman, kendall_tau}) {
      const auto xy = f(x, y), yx = f(y, x);
      EXPECT_GE(xy.statistic, -1.0);
      EXPECT_LE(xy.statistic, 1.0);
      EXPECT_NEAR(xy.statistic, yx.statistic, 1e-12);
      EXPECT_GE(xy.p_value, 0.0);
      EXPECT_LE(xy.p_value, 1.0);
    }
    EXPECT_DOUBLE_EQ(spearman(x, y).statistic, pearson(average_ranks(x), average_ranks(y)).statistic);
    std::vector<double> tx, ty;
    for (double v : x) tx.push_back(std::exp(v));
    for (double v : y) ty.push_back(v * v * v + 3);
    EXPECT_NEAR(spearman(tx, ty).statistic, spearman(x, y).statistic, 1e-12);
    EXPECT_NEAR(kendall_tau(tx, ty).statistic, kendall_tau(x, y).statistic, 1e-12);
  }
}

TEST(Kappa, Examples) {
  const std::vector<std::int64_t> a = {1, 2, 3, 4, 5, 5};
  EXPECT_EQ(cohens_kappa(a, a), 1.0);
  const std::vector<std::int64_t> same = {3, 3, 3};
  EXPECT_EQ(cohens_kappa(same, same), 1.0);
  // p_o = 0.8, p_e = 0.5
  const std::vector<std::int64_t> r1 = {1, 1, 1, 1, 1, 2, 2, 2, 2, 2};
  const std::vector<std::int64_t> r2 = {1, 1, 1, 1, 2, 2, 2, 2, 2, 1};
  EXPECT_NEAR(cohens_kappa(r1, r2), 0.6, 1e-15);
  const std::vector<std::int64_t> u1 = {1, 2, 1, 2}, u2 = {2, 1, 2, 1};
  EXPECT_EQ(cohens_kappa(u1, u2), -1.0);
  EXPECT_LT(cohens_kappa(r1, r2), 1.0);
  EXPECT_TRUE(kappa_gate(0.7));
  EXPECT_FALSE(kappa_gate(0.6));
}

TEST(Ols, MatchesOracle) {
  const auto& o = oracle()["ols"];
  const std::vector<std::vector<double>> X = {vec(o["x1"]), vec(o["x2"])};
  const auto y = vec(o["y"]);
  const auto fit = ols_regression(X, y);
  const auto coef = vec(o["coefficients"]);
  ASSERT_EQ(fit.coefficients.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(fit.coefficients[i], coef[i], 1e-8);
  const auto res = vec(o["residuals"]);
  for (std::size_t i = 0; i < res.size(); ++i) EXPECT_NEAR(fit.residuals[i], res[i], 1e-8);
  EXPECT_NEAR(fit.r2, o["r2"].get<double>(), 1e-9);
  EXPECT_NEAR(fit.f, o["f"].get<double>(), 1e-6);
  EXPECT_NEAR(fit.p, o["p"].get<double>(), 1e-6);

  const std::vector<std::vector<double>> X1 = {vec(o["x1"])};
  const auto reduced = ols_regression(X1, y);
  const auto ft = nested_f_test(reduced, fit);
  EXPECT_NEAR(ft.statistic, o["nested_f"].get<double>(), 1e-6);
  EXPECT_NEAR(ft.p_value, o["nested_p"].get<double>(), 1e-6);
  EXPECT_EQ(nested_f_test(fit, fit).statistic, 0.0);
}

TEST(Ols, Trivial) {
  const std::vector<double> x1 = {1, 2, 3, 4, 5, 6}, x2 = {0, 1, 0, 1, 0, 2};
  std::vector<double> y;
  for (std::size_t i = 0; i < x1.size(); ++i) y.push_back(3 + 2 * x1[i] - x2[i]);
  const std::vector<std::vector<double>> X = {x1, x2};
  const auto fit = ols_regression(X, y);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
  for (double r : fit.residuals) EXPECT_NEAR(r, 0.0, 1e-12);

  const auto intercept = ols_regression(std::vector<std::vector<double>>{}, y);
  EXPECT_NEAR(intercept.coefficients[0], descriptive(y).mean, 1e-12);

  const std::vector<std::vector<double>> dup = {x1, x1};
  EXPECT_EQ(code_of([&] { ols_regression(dup, y); }), ErrorCode::rank_deficient);
  const std::vector<std::vector<double>> scaled = {x1, {2, 4, 6, 8, 10, 12}};
  EXPECT_EQ(code_of([&] { ols_regression(scaled, y); }), ErrorCode::rank_deficient);
  EXPECT_EQ(code_of([&] { ols_regression(X, std::vector<double>{1, 2, 3}); }), ErrorCode::invalid_argument);
  const std::vector<double> y3 = {1, 2, 3};
  const std::vector<std::vector<double>> X3 = {{1, 2, 4}, {0, 1, 1}};
  EXPECT_EQ(code_of([&] { ols_regression(X3, y3); }), ErrorCode::sample_size);
}

TEST(Vif, MatchesOracle) {
  const auto& o = oracle()["vif"];
  const std::vector<std::vector<double>> X = {vec(o["a"]), vec(o["b"]), vec(o["c"])};
  const auto v = vif(X);
  const auto expect = vec(o["vif"]);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(v[i], expect[i], 1e-6);
    EXPECT_GE(v[i], 1.0);
  }
}

TEST(Vif, OrthogonalAndDuplicate) {
  const std::vector<std::vector<double>> X8 = {{1, -1, 1, -1, 1, -1, 1, -1},
                                               {1, 1, -1, -1, 1, 1, -1, -1},
                                               {1, 1, 1, 1, -1, -1, -1, -1}};
  for (double v : vif(X8)) EXPECT_NEAR(v, 1.0, 1e-12);
  const std::vector<std::vector<double>> dup = {X8[0], X8[1], X8[0]};
  EXPECT_EQ(code_of([&] { vif(dup); }), ErrorCode::rank_deficient);
}

namespace {

// Surprisal tracks interactions closely and reactions not at all.
void synthetic(std::vector<lm::SurprisalScore>& scores, std::vector<metrics::IssueMetrics>& rows) {
  std::mt19937 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.05);
  const int n = 60;
  for (int i = 0; i < n; ++i) {
    const bool pr = i % 6 == 5;
    metrics::IssueMetrics m;
    m.source = {"syn/data", i + 1};
    m.kind = pr ? IssueKind::pull_request : IssueKind::issue;
    m.created_at = Timestamp::from_unix(1700000000 + i);
    m.interactions = 2 + i;
    m.participants = 1 + (i * 7) % 5;
    m.reopenings = (i * 5) % 3;
    m.open_state_duration = 3600 * (1 + (i * 11) % 17);
    m.reactions = std::abs(i - (n - 1) / 2);  // symmetric in i
    m.release_mentions = i % 2;
    if (i % 3 == 0) m.importance = static_cast<metrics::Importance>((i / 3) % 3);
    if (i % 4 == 0) m.order_of_address = 1 + (i / 4) % 3;
    rows.push_back(m);
    lm::SurprisalScore s;
    s.source = m.source;
    s.kind = m.kind;
    s.cross_entropy_bits_per_token = 5.0 + 0.1 * i + noise(rng);
    s.token_count = 10;
    scores.push_back(s);
  }
}

const HypothesisOutcome& find(const SuiteResult& r, const std::string& id) {
  for (const auto& o : r.outcomes) {
    if (o.hypothesis_id == id) return o;
  }
  throw std::runtime_error("missing " + id);
}

}  // namespace

TEST(Suite, SyntheticDecisions) {
  std::vector<lm::SurprisalScore> scores;
  std::vector<metrics::IssueMetrics> rows;
  synthetic(scores, rows);
  const auto r = run_hypothesis_suite(scores, rows, 0.05);
  ASSERT_EQ(r.outcomes.size(), 16u);
  ASSERT_EQ(r.regressions.size(), 2u);

  const auto& inter = find(r, "RQ2.H3");
  ASSERT_TRUE(inter.correlation);
  EXPECT_GT(inter.correlation->statistic, 0.9);
  EXPECT_EQ(inter.decision, Decision::reject_null);

  const auto& react = find(r, "RQ4.H3");
  ASSERT_TRUE(react.correlation);
  EXPECT_LT(std::abs(react.correlation->statistic), 0.1);
  EXPECT_EQ(react.decision, Decision::fail_to_reject);

  EXPECT_EQ(find(r, "RQ3.H3").decision, Decision::reject_null);
  EXPECT_EQ(find(r, "RQ4.H4").correlation->test_name, "spearman");
  EXPECT_EQ(find(r, "RQ4.H2").correlation->test_name, "spearman");

  for (const auto& o : r.outcomes) {
    if (!o.correlation || o.correlation->test_name != "pearson") continue;
    ASSERT_TRUE(o.normality_predictor && o.normality_response) << o.hypothesis_id;
    EXPECT_GE(o.normality_predictor->p_value, 0.05) << o.hypothesis_id;
    EXPECT_GE(o.normality_response->p_value, 0.05) << o.hypothesis_id;
  }

  const auto& h5 = r.regressions[0];
  EXPECT_EQ(h5.hypothesis_id, "RQ2.H5");
  EXPECT_EQ(h5.null_predictor, "interactions");
  ASSERT_TRUE(h5.f_test);
  EXPECT_EQ(h5.vif.size(), 4u);
  EXPECT_NE(h5.decision, Decision::not_testable);
}

TEST(Suite, TooFewRowsIsNotTestable) {
  std::vector<lm::SurprisalScore> scores;
  std::vector<metrics::IssueMetrics> rows;
  synthetic(scores, rows);
  rows.resize(2);
  const auto r = run_hypothesis_suite(scores, rows);
  for (const auto& o : r.outcomes) EXPECT_EQ(o.decision, Decision::not_testable);
  for (const auto& g : r.regressions) EXPECT_EQ(g.decision, Decision::not_testable);
  EXPECT_EQ(code_of([&] { run_hypothesis_suite(scores, rows, 1.5); }), ErrorCode::invalid_argument);
}

TEST(Ratings, ParseAndValidate) {
  std::istringstream in("rater_id,issue_id,rating\nr2,a/b#2,3\nr1,a/b#1,5\nr1,a/b#2,4\n");
  const auto files = read_ratings(in);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].rater_id, "r1");
  EXPECT_EQ(files[0].ratings.at(IssueKey{"a/b", 1}), 5);

  std::istringstream bad("rater_id,issue_id,rating\nr1,a/b#1,6\n");
  EXPECT_EQ(code_of([&] { read_ratings(bad); }), ErrorCode::schema);
  std::istringstream twice("rater_id,issue_id,rating\nr1,a/b#1,2\nr1,a/b#1,3\n");
  EXPECT_EQ(code_of([&] { read_ratings(twice); }), ErrorCode::schema);
  std::istringstream key("rater_id,issue_id,rating\nr1,ab1,2\n");
  EXPECT_EQ(code_of([&] { read_ratings(key); }), ErrorCode::schema);
}

TEST(Agreement, Errors) {
  std::vector<TokenSequence> corpus = {{{"a", "b"}, {"x/y", 1}, IssueKind::issue, 0}};
  RatingFile one{"r1", {{{"x/y", 1}, 3}}};
  std::vector<RatingFile> single = {one};
  EXPECT_EQ(code_of([&] { model_agreement_experiment(single, corpus, "x/y"); }), ErrorCode::insufficient_ratings);
  RatingFile other{"r2", {{{"x/y", 9}, 3}}};
  std::vector<RatingFile> disjoint = {one, other};
  EXPECT_EQ(code_of([&] { model_agreement_experiment(disjoint, corpus, "x/y"); }), ErrorCode::insufficient_ratings);
}

TEST(Agreement, GridMatchesOracle) {
  const std::filesystem::path dir = std::filesystem::path(SURPRISAL_TEST_DATA) / "agreement";
  std::ifstream in(dir / "expected_agreement.json");
  const auto expect = json::parse(in);
  const auto corpus = textprep::load_token_dump(dir / "tokens.txt");
  const std::vector<std::filesystem::path> files = {dir / "ratings_r1.csv", dir / "ratings_r2.csv"};
  const auto ratings = load_ratings(files);
  const auto report = model_agreement_experiment(ratings, corpus, "focus/app");

  EXPECT_NEAR(report.kappa, 0.6, 1e-12);
  EXPECT_NEAR(report.kappa, expect["kappa"].get<double>(), 1e-12);
  EXPECT_FALSE(report.kappa_gate_passed);
  ASSERT_EQ(report.sample.size(), expect["sample"].size());
  for (std::size_t i = 0; i < report.sample.size(); ++i) EXPECT_EQ(report.sample[i].str(), expect["sample"][i]);
  EXPECT_EQ(report.rater_disagreements.size(), 2u);

  ASSERT_EQ(report.cells.size(), 30u);
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& c = report.cells[i];
    const auto& e = expect["cells"][i];
    SCOPED_TRACE(std::string(to_string(c.variant)) + " order " + std::to_string(c.order));
    EXPECT_EQ(to_string(c.variant), e["variant"].get<std::string>());
    EXPECT_EQ(c.order, e["order"].get<int>());
    EXPECT_NEAR(c.kendall.statistic, e["tau"].get<double>(), 1e-6);
    EXPECT_NEAR(c.kendall.p_value, e["p"].get<double>(), 1e-6);
  }
}
