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

#include <functional>
#include <istream>

#include "nlifoundry/ingest/dump_reader.hpp"
#include "nlifoundry/ingest/page_filter.hpp"
#include "nlifoundry/ingest/sentences.hpp"

namespace nlif::ingest {

struct IngestOptions {
  DumpFormat format = DumpFormat::Auto;
  std::int64_t min_len = 50;
  PageFilterConfig filter;
  StripConfig strip;
};

struct IngestReport {
  std::size_t pages_read = 0;
  std::size_t pages_kept = 0;
  std::size_t dropped_namespace = 0;
  std::size_t dropped_redirect = 0;
  std::size_t dropped_disambiguation = 0;
  std::size_t markup_recoveries = 0;
  std::size_t sentences = 0;
};

// dump -> filter -> strip -> split, streaming one page at a time.
inline IngestReport ingest_stream(std::istream& in, const IngestOptions& opt,
                                  const std::function<void(const Sentence&)>& sink) {
  DumpReader reader(in, opt.format);
  PageFilter filter(opt.filter);
  SentenceSplitter splitter;
  IngestReport rep;
  StripStats strip_stats;
  while (auto page = reader.next()) {
    ++rep.pages_read;
    auto kept = filter(std::move(*page));
    if (!kept) continue;
    const Article article = make_article(*kept, &strip_stats, opt.strip);
    for (const auto& s : split_sentences(article, opt.min_len, splitter)) {
      ++rep.sentences;
      sink(s);
    }
  }
  rep.pages_kept = filter.kept();
  rep.dropped_namespace = filter.dropped(DropReason::Namespace);
  rep.dropped_redirect = filter.dropped(DropReason::Redirect);
  rep.dropped_disambiguation = filter.dropped(DropReason::Disambiguation);
  rep.markup_recoveries = strip_stats.recoveries;
  return rep;
}

}  // namespace nlif::ingest
