// Copyright 2026 The nlifoundry Authors.
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

// Best-effort wikitext to plain text conversion.
//
// Removed: comments, <ref> and other content-bearing extension tags, HTML
// tags (content kept), templates {{...}}, tables {|...|}, file/image and
// category links, interlanguage links, bold/italic quotes, behavior switches
// (__TOC__). Internal links become their display text and external links
// their label. Headings open sections; reference-like sections ("Note",
// "Referințe", "Legături externe", ...) are dropped with their subsections.
//
// Unsupported: template expansion, parser functions, tables nested inside
// templates, <pre> formatting. Unbalanced markup never throws; each repair is
// counted in StripStats::recoveries.

#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlifoundry/core/text.hpp"
#include "nlifoundry/ingest/normalize.hpp"

namespace nlif::ingest {

struct SectionText {
  std::string path;  // heading titles joined by '/', empty for the lead
  std::string text;  // one paragraph or list item per line

  bool operator==(const SectionText&) const = default;
};

struct StripStats {
  std::size_t recoveries = 0;
};

struct StripConfig {
  std::set<std::string> dropped_sections = {
      "referințe", "referinte", "note", "note de subsol", "bibliografie", "legături externe",
      "legaturi externe", "vezi și", "vezi si", "surse", "lectură suplimentară",
      "lecturi suplimentare", "references", "external links", "see also", "notes",
      "further reading", "bibliography"};
  std::set<std::string> media_namespaces = {"fișier", "file", "image", "imagine", "media",
                                            "categorie", "category"};
  std::set<std::string> content_tags = {
      "ref", "references", "gallery", "math", "timeline", "imagemap", "score", "syntaxhighlight",
      "source", "graph", "mapframe", "templatedata", "includeonly", "chem", "hiero"};
};

namespace detail {

inline bool ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// Case-insensitive search; needle must be lowercase ASCII.
inline std::size_t find_ascii_ci(std::string_view s, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= s.size(); ++i) {
    std::size_t k = 0;
    while (k < needle.size()) {
      char c = s[i + k];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (c != needle[k]) break;
      ++k;
    }
    if (k == needle.size()) return i;
  }
  return std::string_view::npos;
}

inline std::string remove_comments(std::string_view s, StripStats& st) {
  std::string out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto open = s.find("<!--", pos);
    if (open == std::string_view::npos) {
      out.append(s.substr(pos));
      break;
    }
    out.append(s.substr(pos, open - pos));
    const auto close = s.find("-->", open + 4);
    if (close == std::string_view::npos) {
      ++st.recoveries;
      break;
    }
    pos = close + 3;
  }
  return out;
}

// HTML-like tags. Content tags are removed with their body; any other tag
// is removed but its body kept.
inline std::string strip_tags(std::string_view s, const StripConfig& cfg, StripStats& st) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const char c = s[pos];
    if (c != '<' || pos + 1 >= s.size()) {
      out.push_back(c);
      ++pos;
      continue;
    }
    std::size_t p = pos + 1;
    const bool closing = s[p] == '/';
    if (closing) ++p;
    std::size_t name_end = p;
    while (name_end < s.size() &&
           (ascii_alpha(s[name_end]) || (name_end > p && s[name_end] >= '0' && s[name_end] <= '9')))
      ++name_end;
    if (name_end == p) {
      out.push_back(c);
      ++pos;
      continue;
    }
    const std::string name = ascii_lower(s.substr(p, name_end - p));
    const auto gt = s.find('>', name_end);
    const auto next_lt = s.find('<', name_end);
    if (gt == std::string_view::npos || (next_lt != std::string_view::npos && next_lt < gt)) {
      ++st.recoveries;
      out.push_back(' ');
      pos = name_end;
      continue;
    }
    const bool self_closing = s[gt - 1] == '/';
    pos = gt + 1;
    if (name == "br" || name == "p" || name == "div") out.push_back(' ');
    if (closing || self_closing || !cfg.content_tags.count(name)) continue;
    // Skip the body up to the matching close tag.
    const auto close = find_ascii_ci(s, "</" + name, pos);
    if (close == std::string_view::npos) {
      ++st.recoveries;
      continue;
    }
    const auto close_gt = s.find('>', close);
    pos = close_gt == std::string_view::npos ? s.size() : close_gt + 1;
  }
  return out;
}

// Removes {{...}} with nesting. An unclosed opener drops the rest of its line.
inline std::string remove_templates(std::string_view s, StripStats& st) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s.compare(pos, 2, "}}") == 0) {
      ++st.recoveries;
      pos += 2;
      continue;
    }
    if (s.compare(pos, 2, "{{") != 0) {
      out.push_back(s[pos++]);
      continue;
    }
    int depth = 0;
    std::size_t p = pos;
    while (p < s.size()) {
      if (s.compare(p, 2, "{{") == 0) {
        ++depth;
        p += 2;
      } else if (s.compare(p, 2, "}}") == 0) {
        --depth;
        p += 2;
        if (depth == 0) break;
      } else {
        ++p;
      }
    }
    if (depth != 0) {
      ++st.recoveries;
      const auto eol = s.find('\n', pos);
      pos = eol == std::string_view::npos ? s.size() : eol;
      continue;
    }
    pos = p;
  }
  return out;
}

// Removes {| ... |} tables; both delimiters must start a line.
inline std::string remove_tables(std::string_view s, StripStats& st) {
  std::string out;
  int depth = 0;
  for (const auto& raw : text::split(s, '\n')) {
    const auto line = text::trim(raw);
    if (text::starts_with(line, "{|")) {
      ++depth;
      continue;
    }
    if (depth > 0) {
      if (text::starts_with(line, "|}")) --depth;
      continue;
    }
    if (text::starts_with(line, "|}")) {
      ++st.recoveries;
      continue;
    }
    out.append(raw);
    out.push_back('\n');
  }
  if (depth > 0) ++st.recoveries;
  return out;
}

// Splits link content at top-level pipes.
inline std::vector<std::string_view> split_link(std::string_view inner) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner.compare(i, 2, "[[") == 0) {
      ++depth;
      ++i;
    } else if (inner.compare(i, 2, "]]") == 0) {
      --depth;
      ++i;
    } else if (inner[i] == '|' && depth == 0) {
      parts.push_back(inner.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(inner.substr(start));
  return parts;
}

inline bool is_interlanguage_prefix(std::string_view p) {
  if (p.size() < 2 || p.size() > 12) return false;
  for (char c : p)
    if (!((c >= 'a' && c <= 'z') || c == '-')) return false;
  return p.find('-') == std::string_view::npos || p.find('-') >= 2;
}

inline std::string render_links(std::string_view s, const StripConfig& cfg, StripStats& st);

inline std::string render_one_link(std::string_view inner, const StripConfig& cfg,
                                   StripStats& st) {
  const auto parts = split_link(inner);
  std::string_view target = text::trim(parts.front());
  const bool leading_colon = !target.empty() && target.front() == ':';
  if (leading_colon) target.remove_prefix(1);
  const auto colon = target.find(':');
  if (colon != std::string_view::npos && !leading_colon) {
    const auto raw_prefix = text::trim(target.substr(0, colon));
    const std::string prefix = text::to_lower(raw_prefix);
    if (cfg.media_namespaces.count(normalize_text(prefix)) || cfg.media_namespaces.count(prefix))
      return {};
    // Interlanguage codes are written in lowercase ([[en:Rome]]).
    if (is_interlanguage_prefix(raw_prefix)) return {};
  }
  if (parts.size() > 1) {
    const auto display = text::trim(parts.back());
    if (!display.empty()) return render_links(display, cfg, st);
  }
  return std::string(target);
}

inline std::string render_links(std::string_view s, const StripConfig& cfg, StripStats& st) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s.compare(pos, 2, "]]") == 0) {
      ++st.recoveries;
      pos += 2;
      continue;
    }
    if (s.compare(pos, 2, "[[") != 0) {
      out.push_back(s[pos++]);
      continue;
    }
    int depth = 0;
    std::size_t p = pos;
    while (p < s.size()) {
      if (s.compare(p, 2, "[[") == 0) {
        ++depth;
        p += 2;
      } else if (s.compare(p, 2, "]]") == 0) {
        --depth;
        p += 2;
        if (depth == 0) break;
      } else {
        ++p;
      }
    }
    if (depth != 0) {
      ++st.recoveries;
      pos += 2;
      continue;
    }
    out.append(render_one_link(s.substr(pos + 2, p - pos - 4), cfg, st));
    pos = p;
  }
  return out;
}

inline bool starts_url(std::string_view s) {
  for (std::string_view scheme : {"http://", "https://", "ftp://", "//", "mailto:", "news:"}) {
    if (text::starts_with(s, scheme)) return true;
  }
  return false;
}

// [url label] -> label, [url] -> nothing.
inline std::string render_external_links(std::string_view s, StripStats& st) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != '[' || !starts_url(s.substr(pos + 1))) {
      out.push_back(s[pos++]);
      continue;
    }
    const auto close = s.find(']', pos);
    const auto eol = s.find('\n', pos);
    if (close == std::string_view::npos || (eol != std::string_view::npos && eol < close)) {
      ++st.recoveries;
      ++pos;
      continue;
    }
    const auto body = s.substr(pos + 1, close - pos - 1);
    const auto space = body.find(' ');
    if (space != std::string_view::npos) out.append(text::trim(body.substr(space + 1)));
    pos = close + 1;
  }
  return out;
}

inline std::string remove_quotes_and_switches(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] == '\'' && pos + 1 < s.size() && s[pos + 1] == '\'') {
      while (pos < s.size() && s[pos] == '\'') ++pos;
      continue;
    }
    if (s.compare(pos, 2, "__") == 0) {
      std::size_t p = pos + 2;
      while (p < s.size() && s[p] >= 'A' && s[p] <= 'Z') ++p;
      if (p > pos + 2 && s.compare(p, 2, "__") == 0) {
        pos = p + 2;
        continue;
      }
    }
    out.push_back(s[pos++]);
  }
  return out;
}

// Collapses spaces and repairs the punctuation gaps left by removed markup.
inline std::string tidy_line(std::string_view line) {
  std::string collapsed;
  bool space = false;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') {
      space = !collapsed.empty();
      continue;
    }
    if (space) {
      const bool glue_left = c == ',' || c == '.' || c == ';' || c == ':' || c == '!' ||
                             c == '?' || c == ')';
      if (!glue_left && collapsed.back() != '(') collapsed.push_back(' ');
      space = false;
    }
    collapsed.push_back(c);
  }
  std::string out;
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    if (collapsed.compare(i, 2, "()") == 0) {
      ++i;
      if (!out.empty() && out.back() == ' ' && i + 1 < collapsed.size() && collapsed[i + 1] == ' ')
        out.pop_back();
      continue;
    }
    out.push_back(collapsed[i]);
  }
  return std::string(text::trim(out));
}

struct Heading {
  int level;
  std::string title;
};

inline bool parse_heading(std::string_view line, Heading& h) {
  if (line.size() < 3 || line.front() != '=' || line.back() != '=') return false;
  std::size_t lead = 0;
  while (lead < line.size() && line[lead] == '=') ++lead;
  std::size_t trail = 0;
  while (trail < line.size() && line[line.size() - 1 - trail] == '=') ++trail;
  if (lead + trail >= line.size()) return false;
  const std::size_t level = std::min(lead, trail);
  const auto inner = line.substr(level, line.size() - 2 * level);
  const auto title = tidy_line(inner);
  if (title.empty()) return false;
  h.level = static_cast<int>(level);
  h.title = normalize_text(title);
  return true;
}

}  // namespace detail

inline std::vector<SectionText> strip_markup(std::string_view wikitext, StripStats* stats = nullptr,
                                             const StripConfig& cfg = {}) {
  StripStats local;
  StripStats& st = stats ? *stats : local;
  std::string s = detail::remove_comments(wikitext, st);
  s = detail::strip_tags(s, cfg, st);
  s = detail::remove_templates(s, st);
  s = detail::remove_tables(s, st);
  s = detail::render_links(s, cfg, st);
  s = detail::render_external_links(s, st);
  s = detail::remove_quotes_and_switches(s);

  std::vector<SectionText> sections;
  std::vector<detail::Heading> stack;
  int drop_level = 0;  // 0: not dropping
  std::string current_path;
  std::string current_text;
  auto flush = [&] {
    if (!current_text.empty() && drop_level == 0) sections.push_back({current_path, current_text});
    current_text.clear();
  };

  for (const auto& raw : text::split(s, '\n')) {
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    detail::Heading h;
    if (detail::parse_heading(line, h)) {
      flush();
      while (!stack.empty() && stack.back().level >= h.level) stack.pop_back();
      stack.push_back(h);
      if (drop_level != 0 && h.level <= drop_level) drop_level = 0;
      if (drop_level == 0 && cfg.dropped_sections.count(text::to_lower(h.title)))
        drop_level = h.level;
      current_path.clear();
      for (std::size_t i = 0; i < stack.size(); ++i) {
        if (i) current_path.push_back('/');
        current_path += stack[i].title;
      }
      continue;
    }
    if (drop_level != 0) continue;
    if (line.front() == '|' || line.front() == '!' || text::starts_with(line, "----")) continue;
    std::string_view body = line;
    while (!body.empty() && (body.front() == '*' || body.front() == '#' || body.front() == ':' ||
                             body.front() == ';'))
      body.remove_prefix(1);
    auto tidy = detail::tidy_line(body);
    if (tidy.empty()) continue;
    if (!current_text.empty()) current_text.push_back('\n');
    current_text += tidy;
  }
  flush();
  return sections;
}

}  // namespace nlif::ingest
