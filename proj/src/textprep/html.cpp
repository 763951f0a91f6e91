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

// Forgiving markup stripper. The input is usually GitHub-flavoured Markdown
// with embedded HTML, so fenced code is handled first, then inline code spans,
// then tags and entities in a single left-to-right scan.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "surprisal/textprep.hpp"

namespace surprisal::textprep {

namespace {

constexpr std::array<std::string_view, 13> kVoidElements = {
    "area", "base", "br", "col", "embed", "hr", "img",
    "input", "link", "meta", "source", "track", "wbr"};

constexpr std::string_view kCode = " [CODE] ";

// Elements that separate words when rendered.
constexpr std::array<std::string_view, 28> kBlockElements = {
    "address", "article", "aside", "blockquote", "dd", "details", "div", "dl", "dt", "figure",
    "footer", "h1", "h2", "h3", "h4", "h5", "h6", "header", "li", "ol", "p", "section",
    "summary", "table", "td", "th", "tr", "ul"};

bool is_block(std::string_view name) {
  return std::find(kBlockElements.begin(), kBlockElements.end(), name) != kBlockElements.end();
}

bool is_void(std::string_view name) {
  return std::find(kVoidElements.begin(), kVoidElements.end(), name) != kVoidElements.end();
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string ascii_upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool has_space(std::string_view s) { return std::any_of(s.begin(), s.end(), is_space); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes the entity starting at text[pos] == '&'. Returns the number of bytes
// consumed, or 0 when it is not a recognised entity.
std::size_t decode_entity(std::string_view text, std::size_t pos, std::string& out) {
  const auto semi = text.find(';', pos);
  if (semi == std::string_view::npos || semi - pos > 10) return 0;
  const std::string_view name = text.substr(pos + 1, semi - pos - 1);
  std::uint32_t cp = 0;
  if (name.size() > 1 && name[0] == '#') {
    const bool hex = name[1] == 'x' || name[1] == 'X';
    const std::string_view digits = name.substr(hex ? 2 : 1);
    if (digits.empty()) return 0;
    for (char c : digits) {
      const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                    : hex && std::isxdigit(static_cast<unsigned char>(c))
                        ? std::tolower(static_cast<unsigned char>(c)) - 'a' + 10
                        : -1;
      if (v < 0) return 0;
      cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
      if (cp > 0x10FFFF) return 0;
    }
    if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  } else if (name == "amp") {
    cp = '&';
  } else if (name == "lt") {
    cp = '<';
  } else if (name == "gt") {
    cp = '>';
  } else if (name == "quot") {
    cp = '"';
  } else if (name == "apos") {
    cp = '\'';
  } else if (name == "nbsp") {
    cp = ' ';
  } else {
    return 0;
  }
  if (cp != '<' && cp != '>') append_utf8(out, cp);
  return semi - pos + 1;
}

// Replaces ``` / ~~~ fenced blocks (an unterminated fence runs to the end).
std::string replace_fences(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  char fence_char = 0;
  std::size_t fence_len = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    const std::size_t end = eol == std::string_view::npos ? text.size() : eol + 1;
    const std::string_view line = text.substr(pos, end - pos);
    std::size_t indent = 0;
    while (indent < line.size() && indent < 4 && line[indent] == ' ') ++indent;
    const std::string_view body = line.substr(indent);
    std::size_t run = 0;
    if (indent < 4 && !body.empty() && (body[0] == '`' || body[0] == '~')) {
      while (run < body.size() && body[run] == body[0]) ++run;
    }
    if (fence_char == 0) {
      if (run >= 3 && (body[0] == '~' || body.substr(run).find('`') == std::string_view::npos)) {
        fence_char = body[0];
        fence_len = run;
        out.append(kCode);
      } else {
        out.append(line);
      }
    } else if (run >= fence_len && body[0] == fence_char && trim(body.substr(run)).empty()) {
      fence_char = 0;
      out.push_back('\n');
    }
    pos = end;
  }
  return out;
}

// Inline `code` spans: single-token spans keep their content, others become
// [CODE]. Unmatched backticks are left alone.
std::string replace_code_spans(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '`') {
      out.push_back(text[pos++]);
      continue;
    }
    std::size_t run = 0;
    while (pos + run < text.size() && text[pos + run] == '`') ++run;
    const std::string delim(run, '`');
    std::size_t search = pos + run;
    std::size_t close = std::string_view::npos;
    while (true) {
      close = text.find(delim, search);
      if (close == std::string_view::npos) break;
      std::size_t after = close + run;
      if (after < text.size() && text[after] == '`') {
        while (after < text.size() && text[after] == '`') ++after;
        search = after;
        continue;
      }
      break;
    }
    if (close == std::string_view::npos) {
      out.append(delim);
      pos += run;
      continue;
    }
    const std::string_view inner = trim(text.substr(pos + run, close - pos - run));
    if (!inner.empty()) out.append(has_space(inner) ? kCode : inner);
    pos = close + run;
  }
  return out;
}

struct Tag {
  std::string name;  // lowercase
  bool closing = false;
  std::size_t end = 0;  // one past '>'
};

// Parses a tag at text[pos] == '<'. Returns false when this '<' does not open
// a well-formed tag.
bool parse_tag(std::string_view text, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  tag.closing = false;
  if (i < text.size() && text[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const std::size_t name_start = i;
  if (i >= text.size() || !std::isalpha(static_cast<unsigned char>(text[i]))) return false;
  while (i < text.size() &&
         (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '-')) {
    ++i;
  }
  if (i >= text.size()) return false;
  const char next = text[i];
  if (!(is_space(next) || next == '>' || next == '/')) return false;
  tag.name = ascii_lower(text.substr(name_start, i - name_start));
  char quote = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      tag.end = i + 1;
      return true;
    } else if (c == '<') {
      return false;
    }
  }
  return false;
}

// Finds the matching close tag for `name`, case-insensitively.
std::size_t find_close(std::string_view lower, std::size_t from, std::string_view name,
                       std::size_t& close_end) {
  const std::string needle = "</" + std::string(name);
  std::size_t at = from;
  while (true) {
    at = lower.find(needle, at);
    if (at == std::string_view::npos) return std::string_view::npos;
    std::size_t i = at + needle.size();
    while (i < lower.size() && is_space(lower[i])) ++i;
    if (i < lower.size() && lower[i] == '>') {
      close_end = i + 1;
      return at;
    }
    at += needle.size();
  }
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string strip_html(std::string_view input) {
  const std::string text = replace_code_spans(replace_fences(input));
  const std::string_view view(text);
  const std::string lower = ascii_lower(text);
  std::string out;
  out.reserve(text.size());

  std::size_t pos = 0;
  while (pos < view.size()) {
    const char c = view[pos];
    if (c == '&') {
      const std::size_t used = decode_entity(view, pos, out);
      if (used > 0) {
        pos += used;
      } else {
        out.push_back(c);
        ++pos;
      }
      continue;
    }
    if (c == '>') {
      ++pos;
      continue;
    }
    if (c != '<') {
      out.push_back(c);
      ++pos;
      continue;
    }
    if (view.substr(pos, 4) == "<!--") {
      const auto end = view.find("-->", pos + 4);
      pos = end == std::string_view::npos ? view.size() : end + 3;
      continue;
    }
    if (view.substr(pos, 2) == "<!" || view.substr(pos, 2) == "<?") {
      const auto end = view.find('>', pos);
      pos = end == std::string_view::npos ? view.size() : end + 1;
      continue;
    }
    Tag tag;
    if (!parse_tag(view, pos, tag)) {
      ++pos;  // stray '<'
      continue;
    }
    if (is_block(tag.name)) out.push_back(' ');
    if (tag.closing) {
      pos = tag.end;
      continue;
    }
    if (is_void(tag.name)) {
      out.append(" [").append(ascii_upper(tag.name)).append("] ");
      pos = tag.end;
      continue;
    }
    if (tag.name == "pre" || tag.name == "code") {
      std::size_t close_end = 0;
      const std::size_t close = find_close(lower, tag.end, tag.name, close_end);
      if (close == std::string_view::npos) {
        if (tag.name == "pre") {
          out.append(kCode);
          pos = view.size();
        } else {
          pos = tag.end;
        }
        continue;
      }
      const std::string_view inner = trim(view.substr(tag.end, close - tag.end));
      if (tag.name == "pre" || has_space(inner) || inner.find('<') != std::string_view::npos) {
        out.append(kCode);
      } else {
        std::size_t i = 0;
        while (i < inner.size()) {
          if (inner[i] == '&') {
            const std::size_t used = decode_entity(inner, i, out);
            if (used > 0) {
              i += used;
              continue;
            }
          }
          if (inner[i] != '>') out.push_back(inner[i]);
          ++i;
        }
      }
      pos = close_end;
      continue;
    }
    pos = tag.end;  // content element: drop the tag, keep what it wraps
  }
  return collapse_whitespace(out);
}

}  // namespace surprisal::textprep
