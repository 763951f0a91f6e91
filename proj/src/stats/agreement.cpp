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
#include <fstream>
#include <set>

#include "surprisal/csv.hpp"
#include "surprisal/error.hpp"
#include "surprisal/metrics.hpp"
#include "surprisal/stats.hpp"

namespace surprisal::stats {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::minus_repository: return "minus_repository";
    case Variant::leave_one_issue_out: return "leave_one_issue_out";
  }
  return "full";
}

std::vector<RatingFile> read_ratings(std::istream& in, std::string_view what) {
  static constexpr std::string_view kCols[] = {"rater_id", "issue_id", "rating"};
  const auto table = csv::read_table(in, kCols, what);
  std::map<std::string, RatingFile> by_rater;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = std::string(what) + ":" + std::to_string(table.lines[i]);
    if (row[0].empty()) fail(ErrorCode::schema, where + ": empty rater_id");
    const auto key = IssueKey::parse(row[1]);
    if (!key) fail(ErrorCode::schema, where + ": issue_id '" + row[1] + "' is not owner/name#number");
    int rating = 0;
    if (row[2].size() != 1 || row[2][0] < '1' || row[2][0] > '5') {
      fail(ErrorCode::schema, where + ": rating '" + row[2] + "' outside 1..5");
    }
    rating = row[2][0] - '0';
    auto& file = by_rater[row[0]];
    file.rater_id = row[0];
    if (!file.ratings.emplace(*key, rating).second) {
      fail(ErrorCode::schema, where + ": " + row[0] + " rated " + key->str() + " twice");
    }
  }
  std::vector<RatingFile> out;
  for (auto& [id, file] : by_rater) out.push_back(std::move(file));
  return out;
}

std::vector<RatingFile> load_ratings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  return read_ratings(in, path.filename().string());
}

std::vector<RatingFile> load_ratings(std::span<const std::filesystem::path> paths) {
  std::map<std::string, RatingFile> merged;
  for (const auto& path : paths) {
    for (auto& file : load_ratings(path)) {
      auto& into = merged[file.rater_id];
      into.rater_id = file.rater_id;
      for (const auto& [key, r] : file.ratings) {
        if (!into.ratings.emplace(key, r).second) {
          fail(ErrorCode::schema, path.filename().string() + ": " + file.rater_id + " rated " + key.str() +
                                      " in more than one file");
        }
      }
    }
  }
  std::vector<RatingFile> out;
  for (auto& [id, file] : merged) out.push_back(std::move(file));
  return out;
}

namespace {

std::vector<Disagreement> top_quartile(const std::vector<IssueKey>& sample, std::span<const double> model,
                                       std::span<const double> human) {
  const auto rm = average_ranks(model);
  const auto rh = average_ranks(human);
  std::vector<Disagreement> all;
  std::vector<double> distances;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    all.push_back({sample[i], rm[i], rh[i], std::abs(rm[i] - rh[i])});
    distances.push_back(all.back().distance);
  }
  const double threshold = metrics::percentile_linear(distances, 0.75);
  std::vector<Disagreement> out;
  for (const auto& d : all) {
    if (d.distance >= threshold && d.distance > 0) out.push_back(d);
  }
  std::stable_sort(out.begin(), out.end(), [](const Disagreement& a, const Disagreement& b) {
    if (a.distance != b.distance) return a.distance > b.distance;
    return a.issue < b.issue;
  });
  return out;
}

}  // namespace

AgreementReport model_agreement_experiment(std::span<const RatingFile> ratings,
                                           std::span<const TokenSequence> corpus,
                                           const std::string& repository,
                                           const AgreementOptions& options) {
  if (ratings.size() < 2) {
    fail(ErrorCode::insufficient_ratings, "agreement needs at least two raters, got " + std::to_string(ratings.size()));
  }
  if (options.min_order < lm::kMinOrder || options.max_order > lm::kMaxOrder || options.min_order > options.max_order) {
    fail(ErrorCode::invalid_argument, "agreement orders must lie in 1..10");
  }
  std::vector<RatingFile> raters(ratings.begin(), ratings.end());
  std::sort(raters.begin(), raters.end(),
            [](const RatingFile& a, const RatingFile& b) { return a.rater_id < b.rater_id; });

  std::map<IssueKey, const TokenSequence*> docs;
  for (const auto& seq : corpus) {
    if (!seq.tokens.empty()) docs[seq.source] = &seq;
  }

  AgreementReport report;
  report.repository = repository;
  for (const auto& r : raters) report.raters.push_back(r.rater_id);
  for (const auto& [key, rating] : raters.front().ratings) {
    if (key.repo != repository || !docs.count(key)) continue;
    const bool everyone = std::all_of(raters.begin(), raters.end(),
                                      [&](const RatingFile& r) { return r.ratings.count(key) > 0; });
    if (everyone) report.sample.push_back(key);
  }
  if (report.sample.empty()) {
    fail(ErrorCode::insufficient_ratings,
         "no issue of " + repository + " is rated by every rater and present in the corpus");
  }

  // Inter-rater agreement first.
  double kappa_sum = 0;
  int pairs = 0;
  for (std::size_t a = 0; a < raters.size(); ++a) {
    for (std::size_t b = a + 1; b < raters.size(); ++b) {
      std::vector<std::int64_t> r1, r2;
      for (const auto& key : report.sample) {
        r1.push_back(raters[a].ratings.at(key));
        r2.push_back(raters[b].ratings.at(key));
      }
      kappa_sum += cohens_kappa(r1, r2);
      ++pairs;
    }
  }
  report.kappa = kappa_sum / pairs;
  report.kappa_gate_passed = kappa_gate(report.kappa);

  std::vector<double> human;
  for (const auto& key : report.sample) {
    RaterDisagreement d{key, {}};
    double sum = 0;
    for (const auto& r : raters) {
      d.ratings.push_back(r.ratings.at(key));
      sum += r.ratings.at(key);
    }
    human.push_back(sum / static_cast<double>(raters.size()));
    if (std::adjacent_find(d.ratings.begin(), d.ratings.end(), std::not_equal_to<>()) != d.ratings.end()) {
      report.rater_disagreements.push_back(std::move(d));
    }
  }

  for (Variant variant : kVariants) {
    for (int order = options.min_order; order <= options.max_order; ++order) {
      std::vector<double> model;
      if (variant == Variant::leave_one_issue_out) {
        for (const auto& key : report.sample) {
          const auto m = lm::train_excluding(corpus, order, lm::Exclusion::issue(key), options.train);
          model.push_back(m.score(*docs.at(key), lm::ScoreMode::conditional_ngram).cross_entropy_bits_per_token);
        }
      } else {
        const auto exclusion = variant == Variant::full ? lm::Exclusion::none() : lm::Exclusion::repository(repository);
        const auto m = lm::train_excluding(corpus, order, exclusion, options.train);
        for (const auto& key : report.sample) {
          model.push_back(m.score(*docs.at(key), lm::ScoreMode::conditional_ngram).cross_entropy_bits_per_token);
        }
      }
      AgreementCell cell;
      cell.variant = variant;
      cell.order = order;
      cell.kendall = kendall_tau(model, human);
      cell.disagreements = top_quartile(report.sample, model, human);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace surprisal::stats
