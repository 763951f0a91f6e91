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

#ifndef SURPRISAL_TEXTPREP_HPP
#define SURPRISAL_TEXTPREP_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surprisal/records.hpp"
#include "surprisal/token_sequence.hpp"

namespace surprisal::textprep {

struct PreprocessConfig {
  bool remove_stopwords = true;
  bool apply_stemming = true;
  bool lowercase = true;
  std::set<std::string> stopwords;

  /// Defaults with the bundled English stopword list.
  static PreprocessConfig defaults();
  std::uint64_t fingerprint() const;

  bool operator==(const PreprocessConfig&) const = default;
};

/// Bundled English stopword list (lowercase).
const std::set<std::string>& default_stopwords();
/// One word per line; blank lines and '#' comments ignored.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

/// True for "[NAME]" with NAME made of uppercase ASCII letters.
bool is_special_token(std::string_view token);

/// Title then body, separated by one space; empty parts are dropped.
std::string compose_document(std::string_view title, std::string_view body);

/// Void elements become "[TAG]" tokens, <pre> blocks and fenced Markdown code
/// become "[CODE]", <code> and `inline` spans holding a single token are kept
/// verbatim (multi-token spans become "[CODE]"), other elements are unwrapped
/// and entities decoded. Whitespace runs collapse to one space. Never throws;
/// malformed markup is passed through, minus any stray '<' or '>'.
std::string strip_html(std::string_view text);

/// Unicode Normalization Form C. Invalid UTF-8 sequences become U+FFFD.
std::string normalize_unicode(std::string_view text);

/// Removes punctuation and symbol code points at the edges of each word and
/// drops words made only of them. Intra-word characters are kept.
std::string strip_punctuation(std::string_view text);

/// Splits on Unicode whitespace.
std::vector<std::string> tokenize(std::string_view text);

/// Lowercasing, stopword removal and Porter stemming per `config`. Special
/// tokens pass through untouched.
std::vector<std::string> filter_and_stem(std::vector<std::string> tokens,
                                         const PreprocessConfig& config);

/// Porter (1980) suffix stripping, as in the reference C implementation.
/// Words that are not entirely lowercase ASCII letters are returned as-is.
std::string porter_stem(std::string_view word);

/// Full pipeline. Throws EmptyDocument when no token survives.
TokenSequence preprocess(const IssueRecord& issue, const PreprocessConfig& config);

/// Same pipeline on raw title/body text, without the empty check.
std::vector<std::string> preprocess_text(std::string_view title, std::string_view body,
                                         const PreprocessConfig& config);

/// Token dump, one document per line: "owner/name#number<TAB>kind<TAB>tokens"
/// with tokens separated by single spaces. An optional first line
/// "# fingerprint=<16 hex digits>" records the preprocessing config.
void write_token_dump(std::ostream& out, std::span<const TokenSequence> corpus);
std::vector<TokenSequence> read_token_dump(std::istream& in, std::string_view what = "tokens.txt");
std::vector<TokenSequence> load_token_dump(const std::filesystem::path& path);

}  // namespace surprisal::textprep

#endif  // SURPRISAL_TEXTPREP_HPP
