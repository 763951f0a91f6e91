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

#include "surprisal/error.hpp"
#include "surprisal/lm.hpp"

namespace surprisal::lm {

Vocabulary::Vocabulary() {
  tokens_.emplace_back(kBeginMarker);
  index_.emplace(std::string(kBeginMarker), kBeginId);
}

TokenId Vocabulary::intern(std::string_view token) {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<TokenId> Vocabulary::ids() const {
  std::vector<TokenId> out;
  out.reserve(size());
  for (std::size_t i = 1; i < tokens_.size(); ++i) out.push_back(static_cast<TokenId>(i));
  return out;
}

NGramCounts NGramCounts::build(std::span<const TokenSequence> corpus, int order,
                               std::span<const std::string> extra_vocabulary) {
  if (order < kMinOrder || order > kMaxOrder) {
    fail(ErrorCode::invalid_argument,
         "n-gram order " + std::to_string(order) + " outside 1..10");
  }
  NGramCounts out;
  out.order_ = order;
  out.levels_.resize(static_cast<std::size_t>(order));

  NGramKey padded;
  for (const auto& seq : corpus) {
    if (seq.tokens.empty()) continue;
    padded.assign(static_cast<std::size_t>(order - 1), kBeginId);
    for (const auto& tok : seq.tokens) {
      if (tok == kBeginMarker) fail(ErrorCode::invalid_argument, "corpus contains the begin marker");
      padded.push_back(out.vocab_.intern(tok));
    }
    for (std::size_t i = static_cast<std::size_t>(order - 1); i < padded.size(); ++i) {
      for (int k = 1; k <= order; ++k) {
        ++out.levels_[k - 1][padded.substr(i + 1 - k, k)].count;
      }
    }
    out.total_tokens_ += seq.tokens.size();
  }

  // Every distinct (k+1)-gram is one left extension of its k-suffix.
  for (int k = 1; k < order; ++k) {
    auto& lower = out.levels_[k - 1];
    for (const auto& [gram, entry] : out.levels_[k]) {
      ++lower[gram.substr(1)].continuation;
    }
  }

  for (const auto& tok : extra_vocabulary) {
    const TokenId id = out.vocab_.intern(tok);
    out.levels_[0].try_emplace(NGramKey(1, id));
  }
  return out;
}

NGramCounts NGramCounts::from_entries(
    int order, Vocabulary vocab, std::vector<std::unordered_map<NGramKey, NGramEntry>> levels) {
  NGramCounts out;
  out.order_ = order;
  out.vocab_ = std::move(vocab);
  out.levels_ = std::move(levels);
  for (const auto& [gram, e] : out.levels_.at(0)) out.total_tokens_ += e.count;
  return out;
}

const NGramEntry* NGramCounts::find(const NGramKey& gram) const {
  if (gram.empty() || gram.size() > levels_.size()) return nullptr;
  const auto& level = levels_[gram.size() - 1];
  auto it = level.find(gram);
  return it == level.end() ? nullptr : &it->second;
}

CountsOfCounts NGramCounts::counts_of_counts(int k, Smoothing s) const {
  CountsOfCounts coc;
  for (const auto& [gram, e] : level(k)) {
    switch (used_count(e, k, s)) {
      case 1: ++coc.n1; break;
      case 2: ++coc.n2; break;
      case 3: ++coc.n3; break;
      case 4: ++coc.n4; break;
      default: break;
    }
  }
  return coc;
}

Discounts estimate_discounts(const CountsOfCounts& coc) {
  if (coc.n1 == 0 || coc.n2 == 0 || coc.n3 == 0 || coc.n4 == 0) return kFallbackDiscounts;
  const double n1 = static_cast<double>(coc.n1);
  const double n2 = static_cast<double>(coc.n2);
  const double n3 = static_cast<double>(coc.n3);
  const double n4 = static_cast<double>(coc.n4);
  const double y = n1 / (n1 + 2.0 * n2);
  Discounts d;
  d.d1 = std::clamp(1.0 - 2.0 * y * n2 / n1, 0.0, 1.0);
  d.d2 = std::clamp(2.0 - 3.0 * y * n3 / n2, 0.0, 2.0);
  d.d3plus = std::clamp(3.0 - 4.0 * y * n4 / n3, 0.0, 3.0);
  return d;
}

}  // namespace surprisal::lm
