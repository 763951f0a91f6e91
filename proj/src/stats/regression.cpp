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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/fisher_f.hpp>

#include "surprisal/error.hpp"
#include "surprisal/stats.hpp"

namespace surprisal::stats {

namespace {

double f_upper(double f, double d1, double d2) {
  if (std::isinf(f)) return 0.0;
  if (f <= 0) return 1.0;
  const boost::math::fisher_f_distribution<double> dist(d1, d2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

Eigen::MatrixXd design(std::span<const std::vector<double>> predictors, std::size_t n) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(predictors.size() + 1));
  X.col(0).setOnes();
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    if (predictors[j].size() != n) fail(ErrorCode::invalid_argument, "ols: predictor length differs from response");
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(predictors[j][i])) fail(ErrorCode::domain, "ols: non-finite predictor value");
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = predictors[j][i];
    }
  }
  return X;
}

// Rank test on the column-scaled design so that units do not matter.
void require_full_rank(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd scaled = X;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
    const double norm = scaled.col(j).norm();
    if (norm == 0) fail(ErrorCode::rank_deficient, "design column " + std::to_string(j) + " is all zeros");
    scaled.col(j) /= norm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(1e-10);
  if (qr.rank() < scaled.cols()) {
    fail(ErrorCode::rank_deficient, "design matrix is rank deficient (exactly collinear predictors)");
  }
}

}  // namespace

OlsResult ols_regression(std::span<const std::vector<double>> predictors, std::span<const double> y,
                         std::span<const std::string> names) {
  const std::size_t n = y.size();
  const std::size_t k = predictors.size() + 1;
  for (const auto& col : predictors) {
    if (col.size() != n) fail(ErrorCode::invalid_argument, "ols: predictor length differs from response");
  }
  if (n < k + 1) {
    fail(ErrorCode::sample_size, "ols: " + std::to_string(n) + " rows for " + std::to_string(k) +
                                     " coefficients (need at least " + std::to_string(k + 1) + ")");
  }
  const Eigen::MatrixXd X = design(predictors, n);
  Eigen::VectorXd Y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(y[i])) fail(ErrorCode::domain, "ols: non-finite response value");
    Y(static_cast<Eigen::Index>(i)) = y[i];
  }
  require_full_rank(X);

  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(Y);
  const Eigen::VectorXd resid = Y - X * beta;

  OlsResult r;
  r.names.push_back("intercept");
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    r.names.push_back(j < names.size() ? names[j] : "x" + std::to_string(j + 1));
  }
  r.coefficients.assign(beta.data(), beta.data() + beta.size());
  r.residuals.assign(resid.data(), resid.data() + resid.size());
  r.n = n;
  r.df_model = k - 1;
  r.df_resid = n - k;
  r.rss = resid.squaredNorm();
  const double mean = Y.mean();
  const double tss = (Y.array() - mean).square().sum();
  r.r2 = tss > 0 ? 1.0 - r.rss / tss : 0.0;
  if (r.df_model == 0 || tss == 0) {
    r.f = 0;
    r.p = 1;
  } else if (r.rss == 0) {
    r.f = std::numeric_limits<double>::infinity();
    r.p = 0;
  } else {
    r.f = ((tss - r.rss) / static_cast<double>(r.df_model)) / (r.rss / static_cast<double>(r.df_resid));
    r.p = f_upper(r.f, static_cast<double>(r.df_model), static_cast<double>(r.df_resid));
  }
  return r;
}

TestResult nested_f_test(const OlsResult& null_model, const OlsResult& full_model) {
  if (null_model.n != full_model.n) fail(ErrorCode::invalid_argument, "nested_f_test: models fit different samples");
  for (const auto& name : null_model.names) {
    if (std::find(full_model.names.begin(), full_model.names.end(), name) == full_model.names.end()) {
      fail(ErrorCode::invalid_argument, "nested_f_test: '" + name + "' is not in the full model");
    }
  }
  if (full_model.df_resid > null_model.df_resid) {
    fail(ErrorCode::invalid_argument, "nested_f_test: the full model has fewer parameters");
  }
  const auto extra = static_cast<double>(null_model.df_resid - full_model.df_resid);
  TestResult t{0.0, 1.0, "nested_f", full_model.n};
  if (extra == 0) return t;
  const double gain = std::max(0.0, null_model.rss - full_model.rss);
  if (full_model.rss == 0) {
    t.statistic = gain > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    t.p_value = gain > 0 ? 0.0 : 1.0;
    return t;
  }
  t.statistic = (gain / extra) / (full_model.rss / static_cast<double>(full_model.df_resid));
  t.p_value = f_upper(t.statistic, extra, static_cast<double>(full_model.df_resid));
  return t;
}

std::vector<double> vif(std::span<const std::vector<double>> predictors) {
  if (predictors.empty()) return {};
  const std::size_t n = predictors.front().size();
  require_full_rank(design(predictors, n));
  std::vector<double> out;
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    std::vector<std::vector<double>> others;
    for (std::size_t k = 0; k < predictors.size(); ++k) {
      if (k != j) others.push_back(predictors[k]);
    }
    const auto fit = ols_regression(others, predictors[j]);
    if (fit.r2 >= 1.0) fail(ErrorCode::rank_deficient, "vif: predictor " + std::to_string(j + 1) + " is collinear");
    out.push_back(1.0 / (1.0 - fit.r2));
  }
  return out;
}

}  // namespace surprisal::stats
