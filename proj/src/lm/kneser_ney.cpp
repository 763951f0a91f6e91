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
#include <limits>

#include "surprisal/error.hpp"
#include "surprisal/hash.hpp"
#include "surprisal/lm.hpp"

namespace surprisal::lm {

std::string_view to_string(Smoothing s) {
  return s == Smoothing::modified_kneser_ney ? "modified_kneser_ney" : "maximum_likelihood";
}

std::optional<Smoothing> parse_smoothing(std::string_view text) {
  if (text == "modified_kneser_ney") return Smoothing::modified_kneser_ney;
  if (text == "maximum_likelihood") return Smoothing::maximum_likelihood;
  return std::nullopt;
}

std::string_view to_string(ScoreMode m) {
  return m == ScoreMode::conditional_ngram ? "conditional_ngram" : "literal_unigram";
}

std::optional<ScoreMode> parse_score_mode(std::string_view text) {
  if (text == "conditional_ngram" || text == "conditional") return ScoreMode::conditional_ngram;
  if (text == "literal_unigram" || text == "literal") return ScoreMode::literal_unigram;
  return std::nullopt;
}

KneserNeyModel::KneserNeyModel(NGramCounts counts, Smoothing smoothing,
                               std::vector<Discounts> discounts, std::uint64_t fingerprint)
    : counts_(std::move(counts)),
      smoothing_(smoothing),
      discounts_(std::move(discounts)),
      fingerprint_(fingerprint) {
  index_contexts();
}

void KneserNeyModel::index_contexts() {
  const int n = counts_.order();
  contexts_.assign(static_cast<std::size_t>(n), {});
  for (int k = 1; k <= n; ++k) {
    auto& table = contexts_[k - 1];
    for (const auto& [gram, entry] : counts_.level(k)) {
      const std::uint64_t c = counts_.used_count(entry, k, smoothing_);
      if (c == 0) continue;
      ContextStats& st = table[gram.substr(0, gram.size() - 1)];
      st.total += c;
      if (c == 1) {
        ++st.n1;
      } else if (c == 2) {
        ++st.n2;
      } else {
        ++st.n3plus;
      }
    }
  }
}

KneserNeyModel KneserNeyModel::train(std::span<const TokenSequence> corpus, int order,
                                     const TrainOptions& options) {
  if (order < kMinOrder || order > kMaxOrder) {
    fail(ErrorCode::invalid_argument, "n-gram order " + std::to_string(order) + " outside 1..10");
  }
  NGramCounts counts = NGramCounts::build(corpus, order, options.closed_vocabulary);
  if (counts.total_tokens() == 0) fail(ErrorCode::empty_corpus, "training corpus has no tokens");

  std::vector<Discounts> discounts;
  for (int k = 1; k <= order; ++k) {
    discounts.push_back(options.smoothing == Smoothing::maximum_likelihood
                            ? Discounts{}
                            : estimate_discounts(counts.counts_of_counts(k, options.smoothing)));
  }

  Fnv1a h;
  h.field("order").field(std::to_string(order)).field(to_string(options.smoothing));
  for (const auto& seq : corpus) {
    h.field(seq.source.str()).field(to_string(seq.kind));
    for (const auto& t : seq.tokens) h.field(t);
  }
  h.field("closed").field(std::to_string(options.closed_vocabulary.size()));
  return KneserNeyModel(std::move(counts), options.smoothing, std::move(discounts), h.digest());
}

TokenId KneserNeyModel::require(std::string_view token) const {
  auto id = counts_.vocabulary().find(token);
  if (!id || *id == kBeginId) {
    fail(ErrorCode::unknown_token, "'" + std::string(token) + "' is not in the model vocabulary");
  }
  return *id;
}

double KneserNeyModel::prob(std::string_view word, std::span<const std::string> context) const {
  const TokenId w = require(word);
  const std::size_t take = std::min(context.size(), static_cast<std::size_t>(order() - 1));
  NGramKey ctx;
  for (std::size_t i = context.size() - take; i < context.size(); ++i) {
    if (context[i] == kBeginMarker) {
      ctx.push_back(kBeginId);
    } else {
      ctx.push_back(require(context[i]));
    }
  }
  return prob(w, ctx);
}

double KneserNeyModel::prob(TokenId word, std::u32string_view context) const {
  const std::size_t take = std::min(context.size(), static_cast<std::size_t>(order() - 1));
  context = context.substr(context.size() - take);
  const int top = static_cast<int>(take) + 1;

  double p = 1.0 / static_cast<double>(counts_.vocabulary().size());
  NGramKey gram;
  for (int k = 1; k <= top; ++k) {
    const auto hist = context.substr(take - static_cast<std::size_t>(k - 1));
    const auto& table = contexts_[k - 1];
    auto st = table.find(NGramKey(hist));
    if (st == table.end()) continue;  // unseen history: keep the lower-order estimate

    gram.assign(hist);
    gram.push_back(word);
    const NGramEntry* e = counts_.find(gram);
    const std::uint64_t c = e ? counts_.used_count(*e, k, smoothing_) : 0;
    const double total = static_cast<double>(st->second.total);
    if (smoothing_ == Smoothing::maximum_likelihood) {
      p = static_cast<double>(c) / total;
      continue;
    }
    const Discounts& d = discounts_[k - 1];
    const double gamma = d.d1 * static_cast<double>(st->second.n1) +
                         d.d2 * static_cast<double>(st->second.n2) +
                         d.d3plus * static_cast<double>(st->second.n3plus);
    p = (std::max(static_cast<double>(c) - d.for_count(c), 0.0) + gamma * p) / total;
  }
  return p;
}

ProbabilityDistribution KneserNeyModel::unigram_distribution() const {
  std::map<std::string, double> probs;
  for (TokenId id : counts_.vocabulary().ids()) {
    probs.emplace(counts_.vocabulary().token(id), prob(id, NGramKey{}));
  }
  return ProbabilityDistribution(std::move(probs));
}

SurprisalScore KneserNeyModel::score(const TokenSequence& seq, ScoreMode mode) const {
  if (seq.tokens.empty()) {
    fail(ErrorCode::empty_document, seq.source.str() + " has no tokens to score");
  }
  SurprisalScore out;
  out.source = seq.source;
  out.kind = seq.kind;
  out.token_count = seq.tokens.size();
  out.mode = mode;
  out.min_word_bits = std::numeric_limits<double>::infinity();
  out.max_word_bits = 0.0;

  if (mode == ScoreMode::conditional_ngram) {
    const std::size_t pad = static_cast<std::size_t>(order() - 1);
    NGramKey padded(pad, kBeginId);
    for (const auto& t : seq.tokens) padded.push_back(require(t));
    double bits = 0.0;
    for (std::size_t i = pad; i < padded.size(); ++i) {
      const std::u32string_view view(padded);
      const double b = self_information(prob(padded[i], view.substr(i - pad, pad)));
      bits += b;
      out.min_word_bits = std::min(out.min_word_bits, b);
      out.max_word_bits = std::max(out.max_word_bits, b);
    }
    out.cross_entropy_bits_per_token = bits / static_cast<double>(seq.tokens.size());
    return out;
  }

  for (const auto& t : seq.tokens) require(t);
  const ProbabilityDistribution truth = unigram_distribution();
  const ProbabilityDistribution observed = ProbabilityDistribution::empirical(seq.tokens);
  out.cross_entropy_bits_per_token = cross_entropy_literal(observed, truth);
  for (const auto& [symbol, p] : observed.probabilities()) {
    const double b = self_information(truth(symbol));
    out.min_word_bits = std::min(out.min_word_bits, b);
    out.max_word_bits = std::max(out.max_word_bits, b);
  }
  return out;
}

bool Exclusion::excludes(const TokenSequence& seq) const {
  switch (scope) {
    case Scope::none: return false;
    case Scope::repository: return seq.source.repo == repo;
    case Scope::issue: return seq.source.repo == repo && seq.source.number == number;
  }
  return false;
}

KneserNeyModel train_excluding(std::span<const TokenSequence> corpus, int order,
                               const Exclusion& exclusion, const TrainOptions& options) {
  if (exclusion.scope == Exclusion::Scope::none) return KneserNeyModel::train(corpus, order, options);

  std::vector<TokenSequence> kept;
  std::vector<std::string> vocab;
  std::unordered_map<std::string, bool> seen;
  for (const auto& seq : corpus) {
    for (const auto& t : seq.tokens) {
      if (seen.emplace(t, true).second) vocab.push_back(t);
    }
    if (!exclusion.excludes(seq)) kept.push_back(seq);
  }
  TrainOptions opts = options;
  opts.closed_vocabulary.insert(opts.closed_vocabulary.end(), vocab.begin(), vocab.end());
  return KneserNeyModel::train(kept, order, opts);
}

std::vector<SurprisalScore> score_corpus(const KneserNeyModel& model,
                                         std::span<const TokenSequence> corpus, ScoreMode mode) {
  std::vector<SurprisalScore> out;
  out.reserve(corpus.size());
  for (const auto& seq : corpus) {
    if (seq.tokens.empty()) continue;
    out.push_back(model.score(seq, mode));
  }
  return out;
}

}  // namespace surprisal::lm
