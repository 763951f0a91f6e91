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

#include <unicode/normalizer2.h>
#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>

#include "surprisal/error.hpp"
#include "surprisal/hash.hpp"
#include "surprisal/textprep.hpp"

namespace surprisal::textprep {

extern const char* const kDefaultStopwords[];
extern const std::size_t kDefaultStopwordCount;

namespace {

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

// Walks UTF-8 code points; malformed bytes decode as U+FFFD.
template <typename Fn>
void for_each_code_point(std::string_view s, Fn&& fn) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto len = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < len) {
    const std::int32_t start = i;
    UChar32 c = 0;
    U8_NEXT(bytes, i, len, c);
    if (c < 0) c = 0xFFFD;
    fn(c, static_cast<std::size_t>(start), static_cast<std::size_t>(i));
  }
}

bool is_punct_or_symbol(UChar32 c) {
  return (U_GET_GC_MASK(c) & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t word_start = std::string_view::npos;
  for_each_code_point(text, [&](UChar32 c, std::size_t start, std::size_t) {
    if (u_isUWhiteSpace(c)) {
      if (word_start != std::string_view::npos) {
        words.push_back(text.substr(word_start, start - word_start));
        word_start = std::string_view::npos;
      }
    } else if (word_start == std::string_view::npos) {
      word_start = start;
    }
  });
  if (word_start != std::string_view::npos) words.push_back(text.substr(word_start));
  return words;
}

// Trims leading and trailing code points matching `strip`.
template <typename Pred>
std::string_view trim_code_points(std::string_view word, Pred&& strip) {
  struct Span {
    UChar32 c;
    std::size_t start, end;
  };
  std::vector<Span> cps;
  for_each_code_point(word, [&](UChar32 c, std::size_t s, std::size_t e) { cps.push_back({c, s, e}); });
  std::size_t lo = 0;
  std::size_t hi = cps.size();
  while (lo < hi && strip(cps[lo].c)) ++lo;
  while (hi > lo && strip(cps[hi - 1].c)) --hi;
  if (lo == hi) return {};
  return word.substr(cps[lo].start, cps[hi - 1].end - cps[lo].start);
}

std::string to_lower(std::string_view token) {
  if (is_ascii(token)) {
    std::string out(token);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(token.data(), static_cast<std::int32_t>(token.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

}  // namespace

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words(kDefaultStopwords,
                                           kDefaultStopwords + kDefaultStopwordCount);
  return words;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open stopword list " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto words = split_words(line);
    if (words.empty() || words.front().front() == '#') continue;
    out.insert(to_lower(words.front()));
  }
  return out;
}

PreprocessConfig PreprocessConfig::defaults() {
  PreprocessConfig c;
  c.stopwords = default_stopwords();
  return c;
}

std::uint64_t PreprocessConfig::fingerprint() const {
  Fnv1a h;
  h.field(remove_stopwords ? "stop:1" : "stop:0");
  h.field(apply_stemming ? "stem:porter" : "stem:none");
  h.field(lowercase ? "lower:1" : "lower:0");
  for (const auto& w : stopwords) h.field(w);
  return h.digest();
}

bool is_special_token(std::string_view token) {
  if (token.size() < 3 || token.front() != '[' || token.back() != ']') return false;
  return std::all_of(token.begin() + 1, token.end() - 1, [](char c) { return c >= 'A' && c <= 'Z'; });
}

std::string compose_document(std::string_view title, std::string_view body) {
  if (title.empty()) return std::string(body);
  if (body.empty()) return std::string(title);
  std::string out;
  out.reserve(title.size() + 1 + body.size());
  out.append(title).push_back(' ');
  out.append(body);
  return out;
}

std::string normalize_unicode(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) fail(ErrorCode::internal, "ICU NFC normalizer unavailable");
  const icu::UnicodeString in = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
  const icu::UnicodeString normalized = nfc->normalize(in, status);
  if (U_FAILURE(status)) fail(ErrorCode::internal, "ICU normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string strip_punctuation(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::string_view word : split_words(text)) {
    std::string_view kept;
    const std::string_view bracketed = trim_code_points(
        word, [](UChar32 c) { return c != '[' && c != ']' && is_punct_or_symbol(c); });
    if (is_special_token(bracketed)) {
      kept = bracketed;
    } else {
      kept = trim_code_points(word, is_punct_or_symbol);
    }
    if (kept.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(kept);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto w : split_words(text)) out.emplace_back(w);
  return out;
}

std::vector<std::string> filter_and_stem(std::vector<std::string> tokens,
                                         const PreprocessConfig& config) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  const auto is_stopword = [&](const std::string& t) {
    return config.remove_stopwords &&
           (config.stopwords.count(t) > 0 || config.stopwords.count(to_lower(t)) > 0);
  };
  for (auto& tok : tokens) {
    if (is_special_token(tok)) {
      out.push_back(std::move(tok));
      continue;
    }
    std::string t = config.lowercase ? to_lower(tok) : std::move(tok);
    if (is_stopword(t)) continue;
    if (config.apply_stemming) {
      t = porter_stem(t);
      if (is_stopword(t)) continue;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> preprocess_text(std::string_view title, std::string_view body,
                                         const PreprocessConfig& config) {
  const std::string doc = compose_document(title, body);
  const std::string cleaned = strip_punctuation(normalize_unicode(strip_html(doc)));
  return filter_and_stem(tokenize(cleaned), config);
}

TokenSequence preprocess(const IssueRecord& issue, const PreprocessConfig& config) {
  TokenSequence seq;
  seq.tokens = preprocess_text(issue.title, issue.body, config);
  if (seq.tokens.empty()) {
    fail(ErrorCode::empty_document, issue.key().str() + " has no tokens after preprocessing");
  }
  seq.source = issue.key();
  seq.kind = issue.kind;
  seq.config_fingerprint = config.fingerprint();
  return seq;
}

}  // namespace surprisal::textprep
