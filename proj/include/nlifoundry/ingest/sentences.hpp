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

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/text.hpp"
#include "nlifoundry/ingest/dump_reader.hpp"
#include "nlifoundry/ingest/normalize.hpp"
#include "nlifoundry/ingest/wikitext.hpp"

namespace nlif::ingest {

struct Article {
  std::int64_t article_id = 0;
  std::string title;
  std::vector<SectionText> sections;
};

struct Sentence {
  std::string text;
  std::int64_t article_id = 0;
  std::string section_path;
  // Position among all sentences of the section before length filtering, so
  // consecutive values mean the sentences were adjacent in the source.
  std::int64_t index_in_section = 0;
  std::int64_t char_len = 0;

  bool operator==(const Sentence&) const = default;
};

// Strips markup and normalizes every line of every section.
inline Article make_article(const RawPage& page, StripStats* stats = nullptr,
                            const StripConfig& cfg = {}) {
  Article a;
  a.article_id = page.page_id;
  a.title = normalize_text(page.title);
  for (auto& sec : strip_markup(page.wikitext, stats, cfg)) {
    std::string normalized;
    for (const auto& line : text::split(sec.text, '\n')) {
      auto n = normalize_text(line);
      if (n.empty()) continue;
      if (!normalized.empty()) normalized.push_back('\n');
      normalized += n;
    }
    if (!normalized.empty()) a.sections.push_back({sec.path, std::move(normalized)});
  }
  return a;
}

// Common Romanian abbreviations that end in a period without ending a
// sentence. Matching is on the whole token (after any opening bracket or
// quote) and is case-sensitive, with a lowercase fallback.
inline std::set<std::string> default_romanian_abbreviations() {
  return {"str.",   "dr.",    "prof.",  "nr.",    "art.",   "alin.",  "lit.",   "pag.",
          "p.",     "pp.",    "vol.",   "ed.",    "sec.",   "jud.",   "mun.",   "com.",
          "sf.",    "gen.",   "lt.",    "col.",   "mr.",    "cpt.",   "ing.",   "acad.",
          "conf.",  "lect.",  "asist.", "univ.",  "bd.",    "bul.",   "bld.",   "cal.",
          "ap.",    "sc.",    "bl.",    "et.",    "tel.",   "fig.",   "cap.",   "ex.",
          "vs.",    "aprox.", "resp.",  "cca.",   "ian.",   "feb.",   "febr.",  "apr.",
          "aug.",   "sept.",  "oct.",   "nov.",   "dec.",   "st.",    "mt.",    "jr.",
          "sr.",    "co.",    "inc.",   "ltd.",   "d.",     "î.hr.",  "d.hr.",  "î.e.n.",
          "e.n.",   "mil.",   "mld.",   "km.",    "ha.",    "lb.",    "reg.",   "pr.",
          "arh.",   "ep.",    "mitr.",  "pt.",    "dvs.",   "dl.",    "dna.",   "dra.",
          "d-l",    "d-na",   "s.a.",   "s.r.l.", "ș.a.",   "cf.",    "op.",    "cit.",
          "id.",    "ibid.",  "n.b.",   "ms.",    "mss.",   "tr.",    "trad.",  "coord.",
          "red.",   "sg.",    "pl.",    "lat.",   "gr.",    "engl.",  "fr.",    "germ.",
          "magh.",  "rus.",   "sl.",    "tc.",    "it.",    "sp."};
}

class SentenceSplitter {
 public:
  explicit SentenceSplitter(std::set<std::string> abbreviations = default_romanian_abbreviations())
      : abbreviations_(std::move(abbreviations)) {}

  // Splits one paragraph (no newlines) into trimmed sentences.
  std::vector<std::string> split_paragraph(std::string_view para) const {
    const std::u32string cps = text::decode(para);
    std::vector<std::string> out;
    std::size_t start = 0;
    const std::size_t n = cps.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_terminal(cps[i])) continue;
      std::size_t j = i;
      bool only_period = true;
      while (j < n && is_terminal(cps[j])) {
        if (cps[j] != U'.') only_period = false;
        ++j;
      }
      const bool single_period = only_period && j == i + 1;
      while (j < n && is_closer(cps[j])) ++j;
      if (j < n && !text::is_space(cps[j])) {
        i = j - 1;
        continue;
      }
      if (single_period && !period_ends_sentence(cps, start, i, j)) {
        i = j - 1;
        continue;
      }
      push(out, cps, start, j);
      start = j;
      i = j - 1;
    }
    push(out, cps, start, n);
    return out;
  }

  bool is_abbreviation(std::string_view token) const {
    return abbreviations_.count(std::string(token)) > 0 ||
           abbreviations_.count(text::to_lower(token)) > 0;
  }

 private:
  static bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }
  static bool is_closer(char32_t c) {
    return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == U'»' || c == U'”' ||
           c == U'’';
  }
  static bool is_opener(char32_t c) {
    return c == U'"' || c == U'\'' || c == U'(' || c == U'[' || c == U'«' || c == U'„' ||
           c == U'“';
  }

  // period at `dot`, boundary candidate ends at `end`.
  bool period_ends_sentence(const std::u32string& cps, std::size_t start, std::size_t dot,
                            std::size_t end) const {
    std::size_t tok_begin = dot;
    while (tok_begin > start && !text::is_space(cps[tok_begin - 1])) --tok_begin;
    while (tok_begin < dot && is_opener(cps[tok_begin])) ++tok_begin;
    const std::u32string token = cps.substr(tok_begin, dot + 1 - tok_begin);
    if (is_abbreviation(text::encode(token))) return false;
    // Initials such as "I. L. Caragiale".
    if (token.size() == 2 && text::is_upper(token[0])) return false;
    std::size_t k = end;
    while (k < cps.size() && text::is_space(cps[k])) ++k;
    if (k < cps.size() && text::is_lower(cps[k])) return false;
    return true;
  }

  static void push(std::vector<std::string>& out, const std::u32string& cps, std::size_t b,
                   std::size_t e) {
    const auto s = text::encode(std::u32string_view(cps).substr(b, e - b));
    const auto t = text::trim(s);
    if (!t.empty()) out.emplace_back(t);
  }

  std::set<std::string> abbreviations_;
};

// Sentences of every section, dropping those shorter than min_len code
// points. Paragraph (line) breaks always end a sentence.
inline std::vector<Sentence> split_sentences(const Article& article, std::int64_t min_len = 50,
                                             const SentenceSplitter& splitter = SentenceSplitter()) {
  if (min_len < 0) throw ConfigError("min_len must be >= 0");
  std::vector<Sentence> out;
  for (const auto& sec : article.sections) {
    std::int64_t index = 0;
    for (const auto& para : text::split(sec.text, '\n')) {
      for (auto& s : splitter.split_paragraph(para)) {
        const auto len = static_cast<std::int64_t>(text::length(s));
        if (len >= min_len) {
          out.push_back({std::move(s), article.article_id, sec.path, index, len});
        }
        ++index;
      }
    }
  }
  return out;
}

inline json to_json(const Sentence& s) {
  return json{{"text", s.text},
              {"article_id", s.article_id},
              {"section_path", s.section_path},
              {"index_in_section", s.index_in_section},
              {"char_len", s.char_len}};
}

inline Sentence sentence_from_json(const json& j) {
  Sentence s;
  s.text = j.at("text").get<std::string>();
  s.article_id = j.at("article_id").get<std::int64_t>();
  s.section_path = j.value("section_path", std::string());
  s.index_in_section = j.at("index_in_section").get<std::int64_t>();
  s.char_len = j.value("char_len", static_cast<std::int64_t>(text::length(s.text)));
  return s;
}

inline std::vector<Sentence> read_sentences(const std::string& path) {
  std::vector<Sentence> out;
  read_jsonl_file(path, [&](const json& j, std::size_t) { out.push_back(sentence_from_json(j)); });
  return out;
}

}  // namespace nlif::ingest
