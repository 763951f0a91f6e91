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

#include <fstream>
#include <random>
#include <sstream>

#include "surprisal/error.hpp"
#include "surprisal/textprep.hpp"

using namespace surprisal;
using namespace surprisal::textprep;

namespace {

PreprocessConfig off() {
  PreprocessConfig c;
  c.remove_stopwords = false;
  c.apply_stemming = false;
  c.lowercase = false;
  return c;
}

std::size_t ws_count(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::size_t n = 0;
  for (std::string w; in >> w;) ++n;
  return n;
}

std::size_t count_of(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string_view::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST(ComposeDocument, Examples) {
  EXPECT_EQ(compose_document("Crash on load", "App dies"), "Crash on load App dies");
  EXPECT_EQ(compose_document("", "body only"), "body only");
  EXPECT_EQ(compose_document("title only", ""), "title only");
}

TEST(StripHtml, Examples) {
  EXPECT_EQ(strip_html("a<br>b"), "a [BR] b");
  EXPECT_EQ(strip_html("<pre>x = 1;\ny = 2;</pre>"), "[CODE]");
  EXPECT_EQ(strip_html("<ul><li>item</li></ul>"), "item");
}

TEST(StripHtml, VoidElementsAndUnwrapping) {
  EXPECT_EQ(strip_html("see <img src=\"x.png\" alt='a > b'/> here"), "see [IMG] here");
  EXPECT_EQ(strip_html("line<hr/>next<BR />end"), "line [HR] next [BR] end");
  EXPECT_EQ(strip_html("<p>one</p><p>two</p>"), "one two");
  EXPECT_EQ(strip_html("<b>bold</b>face"), "boldface");
  EXPECT_EQ(strip_html("a <!-- hidden --> b"), "a b");
  EXPECT_EQ(strip_html("fish &amp; chips&nbsp;now &#233;"), "fish & chips now \xC3\xA9");
}

TEST(StripHtml, CodeHandling) {
  EXPECT_EQ(strip_html("call <code>foo_bar()</code> now"), "call foo_bar() now");
  EXPECT_EQ(strip_html("run <code>make all</code>"), "run [CODE]");
  EXPECT_EQ(strip_html("use `std::vector` here"), "use std::vector here");
  EXPECT_EQ(strip_html("use `a b c` here"), "use [CODE] here");
  EXPECT_EQ(strip_html("before\n```cpp\nint x = 1;\n```\nafter"), "before [CODE] after");
  EXPECT_EQ(strip_html("before\n~~~\nx\n~~~\nafter"), "before [CODE] after");
  EXPECT_EQ(strip_html("open\n```\nnever closed"), "open [CODE]");
  EXPECT_EQ(strip_html("<pre>unterminated"), "[CODE]");
}

TEST(StripHtml, MalformedMarkupDegrades) {
  EXPECT_EQ(strip_html("a < b and c > d"), "a b and c d");
  EXPECT_EQ(strip_html("<div"), "div");
  EXPECT_EQ(strip_html("x &lt;script&gt; y"), "x script y");
  EXPECT_EQ(strip_html("unknown &bogus; entity"), "unknown &bogus; entity");
  EXPECT_EQ(strip_html(""), "");
}

TEST(NormalizeUnicode, Nfc) {
  EXPECT_EQ(normalize_unicode("e\xCC\x81"), "\xC3\xA9");
  EXPECT_EQ(normalize_unicode("plain ascii"), "plain ascii");
  const std::string nfc = normalize_unicode("Cafe\xCC\x81 na\xC3\xAFve");
  EXPECT_EQ(normalize_unicode(nfc), nfc);
  EXPECT_EQ(normalize_unicode("bad \xFF byte"), "bad \xEF\xBF\xBD byte");
}

TEST(StripPunctuation, Examples) {
  EXPECT_EQ(strip_punctuation("hello, world!"), "hello world");
  EXPECT_EQ(strip_punctuation("foo_bar stays."), "foo_bar stays");
  EXPECT_EQ(strip_punctuation("- - -"), "");
  EXPECT_EQ(strip_punctuation("my.var (ok) \xE2\x80\x9Cquoted\xE2\x80\x9D \xE2\x82\xAC" "5"), "my.var ok quoted 5");
  EXPECT_EQ(strip_punctuation("see [CODE]. and ([BR])"), "see [CODE] and [BR]");
  EXPECT_EQ(strip_punctuation("[not special]"), "not special");
}

TEST(StripPunctuation, Idempotent) {
  for (const char* s : {"a, b; c!", "((x))", "foo_bar. [CODE],", "\xC2\xBFQu\xC3\xA9?", "--x--"}) {
    const std::string once = strip_punctuation(s);
    EXPECT_EQ(strip_punctuation(once), once) << s;
  }
}

TEST(Tokenize, SplitsOnUnicodeWhitespace) {
  EXPECT_EQ(tokenize("a [CODE]  b\tc\n"), (std::vector<std::string>{"a", "[CODE]", "b", "c"}));
  EXPECT_EQ(tokenize("x\xE2\x80\x83y"), (std::vector<std::string>{"x", "y"}));
  EXPECT_TRUE(tokenize("   ").empty());
}

TEST(FilterAndStem, Examples) {
  const auto cfg = PreprocessConfig::defaults();
  EXPECT_EQ(filter_and_stem({"the", "fishing", "fails"}, cfg), (std::vector<std::string>{"fish", "fail"}));
  EXPECT_EQ(filter_and_stem({"[CODE]"}, cfg), (std::vector<std::string>{"[CODE]"}));
  const std::vector<std::string> in = {"The", "Fishing", "[BR]", "of"};
  EXPECT_EQ(filter_and_stem(in, off()), in);
  EXPECT_EQ(filter_and_stem({"THE", "Crashes"}, cfg), (std::vector<std::string>{"crash"}));
}

TEST(FilterAndStem, NoStopwordSurvives) {
  const auto cfg = PreprocessConfig::defaults();
  std::vector<std::string> in(cfg.stopwords.begin(), cfg.stopwords.end());
  in.push_back("doing");
  in.push_back("ourselves");
  for (const auto& t : filter_and_stem(in, cfg)) EXPECT_EQ(cfg.stopwords.count(t), 0u) << t;
}

TEST(Porter, MatchesReferenceTable) {
  std::ifstream in(std::string(SURPRISAL_TEST_DATA) + "/textprep/porter_oracle.tsv");
  ASSERT_TRUE(in);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) {
    const auto tab = line.find('\t');
    EXPECT_EQ(porter_stem(line.substr(0, tab)), line.substr(tab + 1)) << line;
    ++n;
  }
  EXPECT_GT(n, 1000u);
  EXPECT_EQ(porter_stem("Fishing"), "Fishing");  // not lowercase ASCII
}

TEST(StopwordsAndConfig, DefaultsAndFingerprint) {
  const auto& sw = default_stopwords();
  EXPECT_GT(sw.size(), 150u);
  EXPECT_EQ(sw.count("the"), 1u);
  auto a = PreprocessConfig::defaults();
  auto b = PreprocessConfig::defaults();
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  b.apply_stemming = false;
  EXPECT_NE(a.fingerprint(), b.fingerprint());
  b = a;
  b.stopwords.erase("the");
  EXPECT_NE(a.fingerprint(), b.fingerprint());
  EXPECT_THROW(load_stopwords("/nonexistent/stopwords.txt"), Error);
}

TEST(Preprocess, PipelineAndEmptyDocument) {
  IssueRecord issue;
  issue.repo = "o/r";
  issue.number = 7;
  issue.title = "Crash when <b>loading</b> files";
  issue.body = "The app crashes.<br>Stack:\n```\nat foo()\n```\nSee `init_all`.";
  const auto cfg = PreprocessConfig::defaults();
  const auto seq = preprocess(issue, cfg);
  EXPECT_EQ(seq.tokens, (std::vector<std::string>{"crash", "load", "file", "app", "crash", "[BR]",
                                                  "stack", "[CODE]", "see", "init_all"}));
  EXPECT_EQ(seq.source.str(), "o/r#7");
  EXPECT_EQ(seq.config_fingerprint, cfg.fingerprint());
  EXPECT_EQ(preprocess(issue, cfg), seq);

  issue.title = "The";
  issue.body = "<p>!!!</p> of and";
  try {
    (void)preprocess(issue, cfg);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_document);
  }
}

// Random markup soup: checks the token and bracket invariants hold for
// arbitrary input, not just the hand-written cases above.
TEST(Preprocess, PropertiesOnRandomMarkup) {
  const std::vector<std::string> pieces = {
      "word", "Other", " ", "\n", "<br>", "<img src=x>", "<p>", "</p>", "<li>", "<code>x</code>",
      "<code>a b</code>", "<pre>", "</pre>", "`", "```\n", "&amp;", "&nbsp;", "&lt;", "<", ">",
      ",", ".", "the", "running", "e\xCC\x81", "[CODE]", "_", "<!--", "-->", "<div class='a'>"};
  std::mt19937 rng(12345);
  const auto cfg = PreprocessConfig::defaults();
  for (int iter = 0; iter < 2000; ++iter) {
    std::string doc;
    const int len = static_cast<int>(rng() % 25);
    for (int i = 0; i < len; ++i) doc += pieces[rng() % pieces.size()];

    const std::string html = strip_html(doc);
    for (std::size_t i = 0; i < html.size(); ++i) {
      ASSERT_NE(html[i], '<') << doc;
      ASSERT_NE(html[i], '>') << doc;
    }
    const std::string norm = normalize_unicode(html);
    EXPECT_EQ(normalize_unicode(norm), norm);
    const std::string punct = strip_punctuation(norm);
    EXPECT_EQ(strip_punctuation(punct), punct);

    const auto tokens = preprocess_text("", doc, cfg);
    EXPECT_EQ(tokens, preprocess_text("", doc, cfg));
    for (const auto& t : tokens) {
      ASSERT_FALSE(t.empty());
      ASSERT_EQ(ws_count(t), 1u) << t;
      EXPECT_EQ(cfg.stopwords.count(t), 0u);
      if (t.front() == '[') EXPECT_TRUE(is_special_token(t)) << t;
    }
    // Bound on token inflation; see the decisions notes for why the voids and
    // code blocks count twice.
    const std::size_t voids = count_of(doc, "<br>") + count_of(doc, "<img");
    const std::size_t code = count_of(doc, "<code>") + count_of(doc, "<pre>") + count_of(doc, "`");
    const std::size_t splits = count_of(doc, "<p>") + count_of(doc, "</p>") + count_of(doc, "<li>") +
                               count_of(doc, "<div") + count_of(doc, "&nbsp;");
    EXPECT_LE(tokens.size(), ws_count(doc) + 2 * (voids + code) + splits) << doc;
  }
}
