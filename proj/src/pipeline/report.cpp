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
#include <ostream>

#include <json.hpp>

#include "surprisal/pipeline.hpp"

namespace surprisal::pipeline {

namespace {

using nlohmann::ordered_json;
using namespace stats;

ordered_json test_json(const std::optional<TestResult>& t) {
  if (!t) return nullptr;
  return ordered_json{{"test", t->test_name}, {"statistic", t->statistic}, {"p", t->p_value}, {"n", t->n}};
}

ordered_json model_json(const std::optional<OlsResult>& m) {
  if (!m) return nullptr;
  ordered_json coef = ordered_json::object();
  for (std::size_t i = 0; i < m->names.size(); ++i) coef[m->names[i]] = m->coefficients[i];
  return ordered_json{{"coefficients", coef}, {"r2", m->r2},         {"f", m->f},
                      {"p", m->p},            {"rss", m->rss},       {"n", m->n},
                      {"df_model", m->df_model}, {"df_resid", m->df_resid}};
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  // "-0.0000" reads badly in a table
  if (std::string(buf) == "-0.0000") return "0.0000";
  return buf;
}

std::string pval(double p) {
  if (p < 1e-4 && p > 0) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2e", p);
    return buf;
  }
  return num(p);
}

std::string test_cell(const std::optional<TestResult>& t) {
  if (!t) return "-";
  return t->test_name + " " + num(t->statistic) + " (p " + pval(t->p_value) + ")";
}

constexpr const char* kH5Flag =
    "H5 decision follows the analysis plan verbatim: a non-significant F test of the surprisal model "
    "against the difficulty null model counts as reject_null (alternate accepted). This inverts the usual "
    "nested-model convention.";

}  // namespace

void write_report_json(std::ostream& out, const SuiteResult& suite) {
  ordered_json j;
  j["alpha"] = suite.alpha;
  auto& desc = j["descriptives"] = ordered_json::array();
  for (const auto& d : suite.descriptives) {
    desc.push_back({{"stratum", to_string(d.stratum)}, {"variable", d.variable}, {"n", d.d.n}, {"mean", d.d.mean},
                    {"sd", d.d.sd},                    {"min", d.d.min},         {"max", d.d.max}});
  }
  auto& hyp = j["hypotheses"] = ordered_json::array();
  for (const auto& o : suite.outcomes) {
    hyp.push_back({{"id", o.hypothesis_id},
                   {"stratum", to_string(o.stratum)},
                   {"predictor", o.predictor},
                   {"response", o.response},
                   {"normality_predictor", test_json(o.normality_predictor)},
                   {"normality_response", test_json(o.normality_response)},
                   {"correlation", test_json(o.correlation)},
                   {"other_correlation", test_json(o.other_correlation)},
                   {"decision", to_string(o.decision)},
                   {"note", o.note}});
  }
  auto& reg = j["regressions"] = ordered_json::array();
  for (const auto& r : suite.regressions) {
    ordered_json v = ordered_json::object();
    for (const auto& [name, value] : r.vif) v[name] = value;
    reg.push_back({{"id", r.hypothesis_id},
                   {"stratum", to_string(r.stratum)},
                   {"null_predictor", r.null_predictor},
                   {"null_model", model_json(r.null_model)},
                   {"full_model", model_json(r.full_model)},
                   {"f_test", test_json(r.f_test)},
                   {"vif", v},
                   {"decision", to_string(r.decision)},
                   {"decision_rule_inverted", true},
                   {"note", r.note}});
  }
  auto& xref = j["label_cross_reference"] = ordered_json::array();
  for (const auto& o : suite.outcomes) xref.push_back({{"id", o.hypothesis_id}, {"labels", o.table_label}});
  j["notes"] = ordered_json::array({kH5Flag});
  out << j.dump(1) << '\n';
}

void write_report_markdown(std::ostream& out, const SuiteResult& suite) {
  out << "# Hypothesis report\n\n";
  out << "alpha = " << num(suite.alpha) << ", two-sided tests.\n\n";

  out << "## Descriptive statistics\n\n";
  out << "| stratum | variable | n | mean | sd | min | max |\n|---|---|---|---|---|---|---|\n";
  for (const auto& d : suite.descriptives) {
    out << "| " << to_string(d.stratum) << " | " << d.variable << " | " << d.d.n << " | " << num(d.d.mean) << " | "
        << num(d.d.sd) << " | " << num(d.d.min) << " | " << num(d.d.max) << " |\n";
  }

  out << "\n## Correlation hypotheses\n\n";
  out << "| id | stratum | response | normality (surprisal) | normality (response) | test | other | decision |\n"
         "|---|---|---|---|---|---|---|---|\n";
  for (const auto& o : suite.outcomes) {
    out << "| " << o.hypothesis_id << " | " << to_string(o.stratum) << " | " << o.response << " | "
        << test_cell(o.normality_predictor) << " | " << test_cell(o.normality_response) << " | "
        << test_cell(o.correlation) << " | " << test_cell(o.other_correlation) << " | " << to_string(o.decision);
    if (!o.note.empty()) out << " (" << o.note << ")";
    out << " |\n";
  }

  out << "\n## Regression (H5)\n\n";
  for (const auto& r : suite.regressions) {
    out << "### " << r.hypothesis_id << " (" << to_string(r.stratum) << ")\n\n";
    out << "- null predictor: " << (r.null_predictor.empty() ? "-" : r.null_predictor) << "\n";
    if (r.null_model) out << "- null model: R2 " << num(r.null_model->r2) << ", F " << num(r.null_model->f) << "\n";
    if (r.full_model) {
      out << "- full model: R2 " << num(r.full_model->r2) << ", F " << num(r.full_model->f) << "\n";
      out << "- coefficients:";
      for (std::size_t i = 0; i < r.full_model->names.size(); ++i) {
        out << (i ? ", " : " ") << r.full_model->names[i] << " " << num(r.full_model->coefficients[i]);
      }
      out << "\n";
    }
    out << "- nested F: " << test_cell(r.f_test) << "\n";
    if (!r.vif.empty()) {
      out << "- VIF:";
      bool first = true;
      for (const auto& [name, v] : r.vif) {
        out << (first ? " " : ", ") << name << " " << num(v);
        first = false;
      }
      out << "\n";
    }
    out << "- decision: " << to_string(r.decision);
    if (!r.note.empty()) out << " (" << r.note << ")";
    out << "\n\n";
  }
  out << "Note: " << kH5Flag << "\n";

  out << "\n## Hypothesis labels\n\n| id | labels in the study text |\n|---|---|\n";
  for (const auto& o : suite.outcomes) out << "| " << o.hypothesis_id << " | " << o.table_label << " |\n";
}

void write_agreement_json(std::ostream& out, const AgreementReport& report) {
  ordered_json j;
  j["repository"] = report.repository;
  j["raters"] = report.raters;
  ordered_json sample = ordered_json::array();
  for (const auto& k : report.sample) sample.push_back(k.str());
  j["sample"] = sample;
  j["kappa"] = report.kappa;
  j["kappa_gate"] = kKappaGate;
  j["kappa_gate_passed"] = report.kappa_gate_passed;
  auto& rd = j["rater_disagreements"] = ordered_json::array();
  for (const auto& d : report.rater_disagreements) rd.push_back({{"issue", d.issue.str()}, {"ratings", d.ratings}});
  auto& cells = j["cells"] = ordered_json::array();
  for (const auto& c : report.cells) {
    ordered_json dis = ordered_json::array();
    for (const auto& d : c.disagreements) {
      dis.push_back({{"issue", d.issue.str()},
                     {"model_rank", d.model_rank},
                     {"human_rank", d.human_rank},
                     {"distance", d.distance}});
    }
    cells.push_back({{"variant", to_string(c.variant)},
                     {"order", c.order},
                     {"tau", c.kendall.statistic},
                     {"p", c.kendall.p_value},
                     {"n", c.kendall.n},
                     {"disagreements", dis}});
  }
  out << j.dump(1) << '\n';
}

void write_agreement_markdown(std::ostream& out, const AgreementReport& report) {
  out << "# Model agreement\n\n";
  out << "Repository " << report.repository << ", " << report.sample.size() << " issues rated by "
      << report.raters.size() << " raters.\n\n";
  out << "Cohen's kappa: " << num(report.kappa) << " (gate " << num(kKappaGate) << ": "
      << (report.kappa_gate_passed ? "passed" : "not reached") << ")\n\n";

  std::vector<int> orders;
  for (const auto& c : report.cells) {
    if (std::find(orders.begin(), orders.end(), c.order) == orders.end()) orders.push_back(c.order);
  }
  out << "## Kendall tau, model surprisal vs mean rating\n\n| variant |";
  for (int o : orders) out << " " << o << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < orders.size(); ++i) out << "---|";
  out << "\n";
  for (Variant v : kVariants) {
    out << "| " << to_string(v) << " |";
    for (int o : orders) {
      for (const auto& c : report.cells) {
        if (c.variant == v && c.order == o) out << " " << num(c.kendall.statistic) << " |";
      }
    }
    out << "\n";
  }

  out << "\n## Rater disagreements\n\n";
  if (report.rater_disagreements.empty()) out << "none\n";
  for (const auto& d : report.rater_disagreements) {
    out << "- " << d.issue.str() << ":";
    for (std::size_t i = 0; i < d.ratings.size(); ++i) out << " " << report.raters[i] << "=" << d.ratings[i];
    out << "\n";
  }

  out << "\n## Model vs raters, top quartile rank distance\n\n";
  for (const auto& c : report.cells) {
    if (c.disagreements.empty()) continue;
    out << "- " << to_string(c.variant) << ", order " << c.order << ":";
    for (std::size_t i = 0; i < c.disagreements.size(); ++i) {
      const auto& d = c.disagreements[i];
      out << (i ? ", " : " ") << d.issue.str() << " (" << num(d.model_rank) << " vs " << num(d.human_rank) << ")";
    }
    out << "\n";
  }
}

}  // namespace surprisal::pipeline
