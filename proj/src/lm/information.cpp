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

#include <cmath>
#include <limits>

#include "surprisal/error.hpp"
#include "surprisal/lm.hpp"

namespace surprisal::lm {

double self_information(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    fail(ErrorCode::domain, "probability " + std::to_string(p) + " outside [0, 1]");
  }
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  if (p == 1.0) return 0.0;
  return -std::log2(p);
}

ProbabilityDistribution::ProbabilityDistribution(std::map<std::string, double> probabilities)
    : probs_(std::move(probabilities)) {
  if (probs_.empty()) fail(ErrorCode::domain, "distribution has empty support");
  double sum = 0.0;
  for (const auto& [symbol, p] : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorCode::domain, "P(" + symbol + ") = " + std::to_string(p) + " outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    fail(ErrorCode::domain, "probabilities sum to " + std::to_string(sum));
  }
}

ProbabilityDistribution ProbabilityDistribution::empirical(std::span<const std::string> tokens) {
  if (tokens.empty()) fail(ErrorCode::empty_document, "no tokens");
  std::map<std::string, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  std::map<std::string, double> probs;
  const double n = static_cast<double>(tokens.size());
  for (const auto& [t, c] : counts) probs.emplace(t, static_cast<double>(c) / n);
  return ProbabilityDistribution(std::move(probs));
}

double ProbabilityDistribution::operator()(const std::string& symbol) const {
  auto it = probs_.find(symbol);
  return it == probs_.end() ? 0.0 : it->second;
}

double entropy(const ProbabilityDistribution& dist) {
  double h = 0.0;
  for (const auto& [symbol, p] : dist.probabilities()) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double cross_entropy_literal(const ProbabilityDistribution& observed,
                             const ProbabilityDistribution& truth) {
  double h = 0.0;
  for (const auto& [symbol, p] : observed.probabilities()) {
    if (p == 0.0) continue;
    const double q = truth(symbol);
    if (q <= 0.0) {
      fail(ErrorCode::support, "reference distribution assigns zero probability to '" + symbol + "'");
    }
    h -= p * std::log2(q);
  }
  return h;
}

}  // namespace surprisal::lm
