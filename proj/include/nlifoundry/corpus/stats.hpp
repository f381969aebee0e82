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

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <string>

#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/text.hpp"
#include "nlifoundry/corpus/corpus.hpp"

namespace nlif::corpus {

// Jaccard over lowercased word sets; two empty sets overlap fully.
inline double overlap_ratio(std::string_view premise, std::string_view hypothesis) {
  const auto pw = text::words(premise);
  const auto hw = text::words(hypothesis);
  const std::set<std::string> a(pw.begin(), pw.end());
  const std::set<std::string> b(hw.begin(), hw.end());
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& w : a) inter += b.count(w);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

struct StatsCell {
  std::size_t count = 0;
  // Absent when count == 0.
  std::optional<double> avg_premise_words;
  std::optional<double> avg_hypothesis_words;
  std::optional<double> avg_overlap_ratio;
};

// Index 4 of a row is the all-classes column; row 4 is the all-splits row.
struct CorpusStats {
  std::array<std::array<StatsCell, kNumRelations + 1>, 5> cells;

  static constexpr std::size_t kAll = 4;

  const StatsCell& at(Split s, Relation c) const {
    return cells[static_cast<std::size_t>(s)][index_of(c)];
  }
  const StatsCell& split_total(Split s) const { return cells[static_cast<std::size_t>(s)][kAll]; }
  const StatsCell& class_total(Relation c) const { return cells[kAll][index_of(c)]; }
  const StatsCell& overall() const { return cells[kAll][kAll]; }
};

inline CorpusStats compute_stats(const Corpus& corpus) {
  struct Acc {
    std::size_t n = 0;
    double prem = 0.0, hyp = 0.0, ovl = 0.0;
  };
  std::array<std::array<Acc, kNumRelations + 1>, 5> acc{};
  for (const auto& p : corpus.pairs) {
    const double pw = static_cast<double>(text::words(p.premise).size());
    const double hw = static_cast<double>(text::words(p.hypothesis).size());
    const double ov = overlap_ratio(p.premise, p.hypothesis);
    const std::size_t s = static_cast<std::size_t>(corpus.split_of(p.pair_id));
    for (std::size_t row : {s, CorpusStats::kAll})
      for (std::size_t col : {index_of(p.label), CorpusStats::kAll}) {
        auto& a = acc[row][col];
        ++a.n;
        a.prem += pw;
        a.hyp += hw;
        a.ovl += ov;
      }
  }
  CorpusStats st;
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c <= kNumRelations; ++c) {
      const auto& a = acc[r][c];
      auto& cell = st.cells[r][c];
      cell.count = a.n;
      if (a.n == 0) continue;
      const double n = static_cast<double>(a.n);
      cell.avg_premise_words = a.prem / n;
      cell.avg_hypothesis_words = a.hyp / n;
      cell.avg_overlap_ratio = std::clamp(a.ovl / n, 0.0, 1.0);
    }
  return st;
}

inline json to_json(const CorpusStats& st) {
  auto cell_json = [](const StatsCell& c) {
    json j{{"count", c.count}};
    j["avg_premise_words"] = c.avg_premise_words ? json(*c.avg_premise_words) : json(nullptr);
    j["avg_hypothesis_words"] =
        c.avg_hypothesis_words ? json(*c.avg_hypothesis_words) : json(nullptr);
    j["avg_overlap_ratio"] = c.avg_overlap_ratio ? json(*c.avg_overlap_ratio) : json(nullptr);
    return j;
  };
  json out = json::object();
  for (std::size_t r = 0; r < 5; ++r) {
    const std::string row = r == CorpusStats::kAll ? "all" : std::string(to_string(kAllSplits[r]));
    json jr = json::object();
    for (std::size_t c = 0; c <= kNumRelations; ++c) {
      const std::string col =
          c == CorpusStats::kAll ? "all" : std::string(to_string(kAllRelations[c]));
      jr[col] = cell_json(st.cells[r][c]);
    }
    out[row] = jr;
  }
  return out;
}

// Split x class table: count, average premise/hypothesis words, overlap.
inline void print_split_class_table(const CorpusStats& st, std::ostream& out) {
  auto num = [](const std::optional<double>& v, const char* fmt) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof(buf), fmt, *v);
    return std::string(buf);
  };
  char line[160];
  std::snprintf(line, sizeof(line), "%-11s %-12s %8s %9s %9s %8s\n", "split", "class", "count",
                "prem.w", "hyp.w", "overlap");
  out << line;
  for (std::size_t r = 0; r < 5; ++r) {
    if (r == static_cast<std::size_t>(Split::Unassigned) && st.cells[r][CorpusStats::kAll].count == 0)
      continue;
    const std::string row = r == CorpusStats::kAll ? "all" : std::string(to_string(kAllSplits[r]));
    for (std::size_t c = 0; c <= kNumRelations; ++c) {
      const auto& cell = st.cells[r][c];
      const std::string col =
          c == CorpusStats::kAll ? "total" : std::string(to_string(kAllRelations[c]));
      std::snprintf(line, sizeof(line), "%-11s %-12s %8zu %9s %9s %8s\n", row.c_str(),
                    col.c_str(), cell.count, num(cell.avg_premise_words, "%.2f").c_str(),
                    num(cell.avg_hypothesis_words, "%.2f").c_str(),
                    num(cell.avg_overlap_ratio, "%.3f").c_str());
      out << line;
    }
  }
}

}  // namespace nlif::corpus
