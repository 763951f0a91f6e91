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

#ifndef SURPRISAL_LM_HPP
#define SURPRISAL_LM_HPP

// N-gram language models with interpolated modified Kneser-Ney smoothing and
// the information measures built on them.
//
// For a model of order n and a history h of length n-1 the probability of w is
//
//   p_n(w | h) = ( max(c(hw) - D(c(hw)), 0)
//                  + (D1 N1(h.) + D2 N2(h.) + D3+ N3+(h.)) p_{n-1}(w | h') )
//                / sum_v c(hv)
//
// where c() is the raw count at the highest level and the continuation count
// N1+(. g) at every lower level, h' drops the oldest word of h, and p_0 is
// uniform over the vocabulary. Histories never seen at a level back off to the
// next lower level unchanged. All logarithms are base 2.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "surprisal/records.hpp"
#include "surprisal/token_sequence.hpp"

namespace surprisal::lm {

inline constexpr int kMinOrder = 1;
inline constexpr int kMaxOrder = 10;
inline constexpr std::string_view kBeginMarker = "<s>";

// ---------------------------------------------------------------------------
// Information measures

/// -log2(p). Returns +infinity for p == 0; throws DomainError outside [0, 1].
double self_information(double p);

/// Finite distribution over string symbols. Construction validates that every
/// probability lies in [0, 1] and that they sum to 1 within 1e-9.
class ProbabilityDistribution {
 public:
  ProbabilityDistribution() = default;
  explicit ProbabilityDistribution(std::map<std::string, double> probabilities);

  /// Relative frequencies of `tokens`.
  static ProbabilityDistribution empirical(std::span<const std::string> tokens);

  const std::map<std::string, double>& probabilities() const { return probs_; }
  double operator()(const std::string& symbol) const;
  std::size_t size() const { return probs_.size(); }

 private:
  std::map<std::string, double> probs_;
};

/// Shannon entropy in bits, with 0 log 0 = 0.
double entropy(const ProbabilityDistribution& dist);

/// -sum_x observed(x) log2 truth(x). Throws SupportError when truth gives
/// zero probability to a symbol that observed uses.
double cross_entropy_literal(const ProbabilityDistribution& observed,
                             const ProbabilityDistribution& truth);

// ---------------------------------------------------------------------------
// Counting

using TokenId = char32_t;
using NGramKey = std::u32string;  // token ids, oldest first

inline constexpr TokenId kBeginId = 0;

class Vocabulary {
 public:
  Vocabulary();

  TokenId intern(std::string_view token);
  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }

  /// Number of predictable tokens (excludes the begin marker).
  std::size_t size() const { return tokens_.size() - 1; }
  /// Ids 1..size(), i.e. every predictable token.
  std::vector<TokenId> ids() const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

struct NGramEntry {
  std::uint64_t count = 0;         // occurrences ending at a real position
  std::uint64_t continuation = 0;  // distinct left extensions
};

struct CountsOfCounts {
  std::uint64_t n1 = 0, n2 = 0, n3 = 0, n4 = 0;
  bool operator==(const CountsOfCounts&) const = default;
};

struct Discounts {
  double d1 = 0.0, d2 = 0.0, d3plus = 0.0;
  double for_count(std::uint64_t c) const {
    return c == 0 ? 0.0 : c == 1 ? d1 : c == 2 ? d2 : d3plus;
  }
  bool operator==(const Discounts&) const = default;
};

inline constexpr Discounts kFallbackDiscounts{0.5, 1.0, 1.5};

/// Y = n1/(n1+2n2); D1 = 1-2Y n2/n1; D2 = 2-3Y n3/n2; D3+ = 3-4Y n4/n3, each
/// clamped to [0,1], [0,2], [0,3]. Falls back to kFallbackDiscounts when any
/// of n1..n4 is zero.
Discounts estimate_discounts(const CountsOfCounts& coc);

enum class Smoothing { modified_kneser_ney, maximum_likelihood };

std::string_view to_string(Smoothing s);
std::optional<Smoothing> parse_smoothing(std::string_view text);

/// Per-history aggregate over the counts used at one level.
struct ContextStats {
  std::uint64_t total = 0;
  std::uint64_t n1 = 0, n2 = 0, n3plus = 0;
};

/// N-gram tables for levels 1..order. Level k holds every k-gram ending at a
/// non-padding position of a sequence padded with order-1 begin markers.
class NGramCounts {
 public:
  static NGramCounts build(std::span<const TokenSequence> corpus, int order,
                           std::span<const std::string> extra_vocabulary = {});

  int order() const { return order_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  Vocabulary& vocabulary() { return vocab_; }
  std::uint64_t total_tokens() const { return total_tokens_; }

  const std::unordered_map<NGramKey, NGramEntry>& level(int k) const { return levels_.at(k - 1); }
  const NGramEntry* find(const NGramKey& gram) const;

  /// Count that drives level k: raw counts at the highest level (or at every
  /// level under maximum likelihood), continuation counts below.
  std::uint64_t used_count(const NGramEntry& e, int k, Smoothing s) const {
    return (k == order_ || s == Smoothing::maximum_likelihood) ? e.count : e.continuation;
  }
  CountsOfCounts counts_of_counts(int k, Smoothing s) const;

  // Used by the model reader to restore tables verbatim.
  static NGramCounts from_entries(int order, Vocabulary vocab,
                                  std::vector<std::unordered_map<NGramKey, NGramEntry>> levels);

 private:
  int order_ = 0;
  Vocabulary vocab_;
  std::vector<std::unordered_map<NGramKey, NGramEntry>> levels_;
  std::uint64_t total_tokens_ = 0;
};

// ---------------------------------------------------------------------------
// Model

enum class ScoreMode { conditional_ngram, literal_unigram };

std::string_view to_string(ScoreMode m);
std::optional<ScoreMode> parse_score_mode(std::string_view text);

struct SurprisalScore {
  IssueKey source;
  IssueKind kind = IssueKind::issue;
  double cross_entropy_bits_per_token = 0.0;
  std::size_t token_count = 0;
  ScoreMode mode = ScoreMode::conditional_ngram;
  // Per-word surprisal summaries; reported, never used for hypothesis tests.
  double min_word_bits = 0.0;
  double max_word_bits = 0.0;
};

struct TrainOptions {
  Smoothing smoothing = Smoothing::modified_kneser_ney;
  // Tokens that must be scorable even if absent from the training corpus.
  std::vector<std::string> closed_vocabulary;
};

class KneserNeyModel {
 public:
  /// Throws EmptyCorpus when the corpus holds no tokens and InvalidArgument
  /// when order is outside 1..10.
  static KneserNeyModel train(std::span<const TokenSequence> corpus, int order,
                              const TrainOptions& options = {});

  int order() const { return counts_.order(); }
  Smoothing smoothing() const { return smoothing_; }
  const NGramCounts& counts() const { return counts_; }
  const std::vector<Discounts>& discounts() const { return discounts_; }
  std::uint64_t config_fingerprint() const { return fingerprint_; }

  /// p(word | context). Only the last order-1 context words are used; shorter
  /// contexts query the corresponding lower level. Throws UnknownToken.
  double prob(std::string_view word, std::span<const std::string> context) const;
  double prob(TokenId word, std::u32string_view context) const;

  /// Model distribution over the vocabulary for the empty history.
  ProbabilityDistribution unigram_distribution() const;

  /// Bits per token of `seq`; throws EmptyDocument for an empty sequence.
  SurprisalScore score(const TokenSequence& seq, ScoreMode mode) const;

  void write(std::ostream& out) const;
  static KneserNeyModel read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static KneserNeyModel load(const std::filesystem::path& path);

 private:
  KneserNeyModel(NGramCounts counts, Smoothing smoothing, std::vector<Discounts> discounts,
                 std::uint64_t fingerprint);
  void index_contexts();
  TokenId require(std::string_view token) const;

  NGramCounts counts_;
  Smoothing smoothing_ = Smoothing::modified_kneser_ney;
  std::vector<Discounts> discounts_;  // index k-1
  std::vector<std::unordered_map<NGramKey, ContextStats>> contexts_;  // index k-1
  std::uint64_t fingerprint_ = 0;
};

/// Which part of the corpus a model must not see.
struct Exclusion {
  enum class Scope { none, repository, issue };
  Scope scope = Scope::none;
  std::string repo;
  std::int64_t number = 0;

  static Exclusion none() { return {}; }
  static Exclusion repository(std::string name) { return {Scope::repository, std::move(name), 0}; }
  static Exclusion issue(IssueKey key) { return {Scope::issue, std::move(key.repo), key.number}; }
  bool excludes(const TokenSequence& seq) const;
};

/// Trains on the corpus minus the excluded scope. The vocabulary of the full
/// corpus is kept so that excluded items stay scorable.
KneserNeyModel train_excluding(std::span<const TokenSequence> corpus, int order,
                               const Exclusion& exclusion, const TrainOptions& options = {});

/// One score per non-empty sequence, in input order.
std::vector<SurprisalScore> score_corpus(const KneserNeyModel& model,
                                         std::span<const TokenSequence> corpus,
                                         ScoreMode mode = ScoreMode::conditional_ngram);

}  // namespace surprisal::lm

#endif  // SURPRISAL_LM_HPP
