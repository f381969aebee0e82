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

// Streaming reader for MediaWiki page dumps. Two encodings are accepted:
//
//   * the XML export format (<mediawiki><page><title/><ns/><id/>...<text/>),
//   * JSONL, one {"id","title","namespace","text"} object per line.
//
// Pages are produced one at a time; memory is bounded by the largest page.

#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/text.hpp"

namespace nlif::ingest {

struct RawPage {
  std::int64_t page_id = 0;
  std::string title;
  int ns = 0;
  std::string wikitext;
  // Set when the XML export marks the page with a <redirect/> element.
  bool redirect = false;

  bool operator==(const RawPage&) const = default;
};

enum class DumpFormat { Auto, Xml, Jsonl };

inline DumpFormat parse_dump_format(std::string_view s) {
  if (s == "auto") return DumpFormat::Auto;
  if (s == "xml") return DumpFormat::Xml;
  if (s == "jsonl") return DumpFormat::Jsonl;
  throw ConfigError("unknown dump format '" + std::string(s) + "'");
}

// Buffered byte reader that tracks the absolute offset of the next byte.
class ByteSource {
 public:
  explicit ByteSource(std::istream& in) : in_(in) {}

  int peek() {
    if (pos_ == len_ && !fill()) return -1;
    return static_cast<unsigned char>(buf_[pos_]);
  }

  int get() {
    const int c = peek();
    if (c >= 0) {
      ++pos_;
      ++offset_;
    }
    return c;
  }

  std::uint64_t offset() const { return offset_; }

 private:
  bool fill() {
    if (!in_) return false;
    in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    len_ = static_cast<std::size_t>(in_.gcount());
    pos_ = 0;
    return len_ > 0;
  }

  std::istream& in_;
  std::array<char, 1 << 16> buf_{};
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  std::uint64_t offset_ = 0;
};

// Minimal pull scanner for the subset of XML used by wiki exports: elements,
// attributes, character/entity references, comments, CDATA, processing
// instructions and a DOCTYPE. Enforces tag balance.
class XmlScanner {
 public:
  enum class Kind { StartTag, EndTag, Text, End };

  struct Token {
    Kind kind = Kind::End;
    std::string name;  // element name for tags
    std::string text;  // decoded character data for Text
    bool self_closing = false;
    std::uint64_t offset = 0;
  };

  explicit XmlScanner(ByteSource& src) : src_(src) {}

  Token next() {
    Token tok;
    tok.offset = src_.offset();
    const int c = src_.peek();
    if (c < 0) {
      if (!stack_.empty()) throw TruncationError("unclosed <" + stack_.back() + ">", src_.offset());
      if (!seen_root_) throw TruncationError("no root element", src_.offset());
      tok.kind = Kind::End;
      return tok;
    }
    if (c != '<') {
      tok.kind = Kind::Text;
      read_text(tok.text);
      if (stack_.empty() && !text::trim(tok.text).empty())
        throw ParseError("character data outside the root element", tok.offset);
      return tok;
    }
    src_.get();
    const int d = src_.peek();
    if (d == '/') {
      src_.get();
      tok.kind = Kind::EndTag;
      tok.name = read_name();
      skip_ws();
      expect('>');
      if (stack_.empty() || stack_.back() != tok.name)
        throw ParseError("mismatched closing tag </" + tok.name + ">", tok.offset);
      stack_.pop_back();
      return tok;
    }
    if (d == '!') {
      src_.get();
      read_markup_declaration(tok);
      return tok;
    }
    if (d == '?') {
      skip_until("?>");
      return next();
    }
    tok.kind = Kind::StartTag;
    tok.name = read_name();
    read_attributes(tok);
    if (!tok.self_closing) stack_.push_back(tok.name);
    seen_root_ = true;
    return tok;
  }

  std::size_t depth() const { return stack_.size(); }

 private:
  static bool is_name_char(int c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.' || c == ':' || c >= 0x80;
  }

  int must_get(const char* context) {
    const int c = src_.get();
    if (c < 0) throw TruncationError(std::string("end of stream inside ") + context, src_.offset());
    return c;
  }

  void expect(char want) {
    const std::uint64_t at = src_.offset();
    const int c = must_get("tag");
    if (c != want) throw ParseError(std::string("expected '") + want + "'", at);
  }

  void skip_ws() {
    while (true) {
      const int c = src_.peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        src_.get();
      } else {
        if (c < 0) throw TruncationError("end of stream inside tag", src_.offset());
        return;
      }
    }
  }

  std::string read_name() {
    std::string name;
    while (true) {
      const int c = src_.peek();
      if (c < 0) throw TruncationError("end of stream inside tag name", src_.offset());
      if (!is_name_char(c)) break;
      name.push_back(static_cast<char>(src_.get()));
    }
    if (name.empty()) throw ParseError("expected a tag name", src_.offset());
    return name;
  }

  void read_attributes(Token& tok) {
    while (true) {
      skip_ws();
      const int c = src_.peek();
      if (c == '>') {
        src_.get();
        return;
      }
      if (c == '/') {
        src_.get();
        expect('>');
        tok.self_closing = true;
        return;
      }
      read_name();
      skip_ws();
      expect('=');
      skip_ws();
      const std::uint64_t at = src_.offset();
      const int q = must_get("attribute");
      if (q != '"' && q != '\'') throw ParseError("unquoted attribute value", at);
      std::string ignored;
      while (true) {
        const int v = must_get("attribute value");
        if (v == q) break;
        if (v == '<') throw ParseError("'<' in attribute value", src_.offset() - 1);
        if (v == '&') {
          decode_entity(ignored);
        }
      }
    }
  }

  void read_text(std::string& out) {
    while (true) {
      const int c = src_.peek();
      if (c < 0 || c == '<') return;
      src_.get();
      if (c == '&') {
        decode_entity(out);
      } else {
        out.push_back(static_cast<char>(c));
      }
    }
  }

  // Called after '&' has been consumed.
  void decode_entity(std::string& out) {
    const std::uint64_t at = src_.offset() - 1;
    std::string name;
    while (true) {
      const int c = must_get("entity reference");
      if (c == ';') break;
      if (name.size() > 10) throw ParseError("unterminated entity reference", at);
      name.push_back(static_cast<char>(c));
    }
    if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "amp") out.push_back('&');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (name.size() > 1 && name[0] == '#') {
      unsigned long cp = 0;
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const char* first = name.data() + (hex ? 2 : 1);
      const char* last = name.data() + name.size();
      auto [ptr, ec] = std::from_chars(first, last, cp, hex ? 16 : 10);
      if (ec != std::errc() || ptr != last || first == last || cp > 0x10FFFF || cp == 0)
        throw ParseError("bad character reference &" + name + ";", at);
      text::append(out, static_cast<char32_t>(cp));
    } else {
      throw ParseError("unknown entity &" + name + ";", at);
    }
  }

  void skip_until(std::string_view terminator) {
    std::size_t matched = 0;
    while (matched < terminator.size()) {
      const int c = must_get("markup");
      if (c == terminator[matched]) {
        ++matched;
      } else {
        matched = (c == terminator[0]) ? 1 : 0;
      }
    }
  }

  // Comment, CDATA section or DOCTYPE; '<!' already consumed.
  void read_markup_declaration(Token& tok) {
    const int c = src_.peek();
    if (c == '-') {
      src_.get();
      expect('-');
      skip_until("-->");
      tok = next();
      return;
    }
    if (c == '[') {
      for (char want : std::string_view("[CDATA[")) expect(want);
      tok.kind = Kind::Text;
      std::string data;
      std::size_t matched = 0;
      static constexpr std::string_view kEnd = "]]>";
      while (matched < kEnd.size()) {
        const int v = must_get("CDATA section");
        data.push_back(static_cast<char>(v));
        matched = (v == kEnd[matched]) ? matched + 1 : (v == ']' ? 1 : 0);
      }
      data.resize(data.size() - kEnd.size());
      tok.text = std::move(data);
      return;
    }
    // DOCTYPE; internal subsets are not supported.
    skip_until(">");
    tok = next();
  }

  ByteSource& src_;
  std::vector<std::string> stack_;
  bool seen_root_ = false;
};

// Pull reader over a dump. Call next() until it returns nullopt.
class DumpReader {
 public:
  DumpReader(std::istream& in, DumpFormat format = DumpFormat::Auto) : src_(in), format_(format) {
    if (format_ == DumpFormat::Auto) format_ = detect();
    if (format_ == DumpFormat::Xml) xml_.emplace(src_);
  }

  DumpFormat format() const { return format_; }

  std::optional<RawPage> next() {
    return format_ == DumpFormat::Xml ? next_xml() : next_jsonl();
  }

 private:
  DumpFormat detect() {
    while (true) {
      const int c = src_.peek();
      if (c < 0) return DumpFormat::Jsonl;  // empty stream: no pages either way
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        src_.get();
        continue;
      }
      // UTF-8 byte order mark.
      if (c == 0xEF) {
        src_.get();
        if (src_.get() != 0xBB || src_.get() != 0xBF) throw ParseError("bad byte order mark", 0);
        continue;
      }
      if (c == '<') return DumpFormat::Xml;
      if (c == '{') return DumpFormat::Jsonl;
      throw ParseError("cannot detect dump format", src_.offset());
    }
  }

  static std::int64_t parse_int(const std::string& s, const char* field, std::uint64_t at) {
    const auto t = text::trim(s);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
      throw ParseError(std::string("non-integer <") + field + ">", at);
    return v;
  }

  std::optional<RawPage> next_xml() {
    using Kind = XmlScanner::Kind;
    XmlScanner& xml = *xml_;
    std::optional<RawPage> page;
    std::size_t page_depth = 0;
    bool have_id = false;
    std::string* capture = nullptr;
    std::string field_text;
    std::string field_name;
    std::uint64_t field_offset = 0;
    while (true) {
      XmlScanner::Token tok = xml.next();
      switch (tok.kind) {
        case Kind::End:
          return std::nullopt;
        case Kind::Text:
          if (capture) capture->append(tok.text);
          break;
        case Kind::StartTag:
          if (!page) {
            if (tok.name == "page" && !tok.self_closing) {
              page.emplace();
              page_depth = xml.depth();
              have_id = false;
            }
            break;
          }
          if (tok.name == "redirect") {
            page->redirect = true;
          } else if (tok.name == "text" && !tok.self_closing) {
            capture = &page->wikitext;
          } else if (xml.depth() == page_depth + 1 && !tok.self_closing &&
                     (tok.name == "title" || tok.name == "ns" || (tok.name == "id" && !have_id))) {
            field_text.clear();
            field_name = tok.name;
            field_offset = tok.offset;
            capture = &field_text;
          }
          break;
        case Kind::EndTag:
          if (!page) break;
          if (tok.name == "text") {
            capture = nullptr;
          } else if (capture == &field_text && tok.name == field_name) {
            capture = nullptr;
            if (field_name == "title") {
              page->title = field_text;
            } else if (field_name == "ns") {
              page->ns = static_cast<int>(parse_int(field_text, "ns", field_offset));
            } else {
              page->page_id = parse_int(field_text, "id", field_offset);
              have_id = true;
            }
          } else if (tok.name == "page" && xml.depth() == page_depth - 1) {
            if (!have_id) throw ParseError("page without <id>", tok.offset);
            return page;
          }
          break;
      }
    }
  }

  std::optional<RawPage> next_jsonl() {
    while (true) {
      const std::uint64_t line_start = src_.offset();
      std::string line;
      bool saw_newline = false;
      while (true) {
        const int c = src_.get();
        if (c < 0) break;
        if (c == '\n') {
          saw_newline = true;
          break;
        }
        line.push_back(static_cast<char>(c));
      }
      if (!saw_newline && line.empty()) return std::nullopt;
      if (text::trim(line).empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        const bool at_end = e.byte >= line.size();
        if (!saw_newline && at_end) throw TruncationError("incomplete JSON record", line_start);
        throw ParseError(std::string("malformed JSON record (") + e.what() + ")",
                         line_start + (e.byte > 0 ? e.byte - 1 : 0));
      }
      try {
        RawPage page;
        if (!j.is_object()) throw ParseError("JSON record is not an object", line_start);
        page.page_id = j.at("id").get<std::int64_t>();
        page.title = j.at("title").get<std::string>();
        page.ns = j.value("namespace", 0);
        page.wikitext = j.value("text", std::string());
        page.redirect = j.value("redirect", false);
        return page;
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad page record: ") + e.what(), line_start);
      }
    }
  }

  ByteSource src_;
  DumpFormat format_;
  std::optional<XmlScanner> xml_;
};

}  // namespace nlif::ingest
