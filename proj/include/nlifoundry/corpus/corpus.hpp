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
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/hash.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/relation.hpp"
#include "nlifoundry/labeler/labeled_pair.hpp"

namespace nlif::corpus {

using labeler::LabeledPair;

enum class Split { Train = 0, Val = 1, Test = 2, Unassigned = 3 };

inline constexpr std::array<Split, 4> kAllSplits = {Split::Train, Split::Val, Split::Test,
                                                    Split::Unassigned};

inline constexpr std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    case Split::Unassigned: return "unassigned";
  }
  return "unassigned";
}

inline std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val" || s == "validation" || s == "dev") return Split::Val;
  if (s == "test") return Split::Test;
  if (s == "unassigned" || s.empty()) return Split::Unassigned;
  return std::nullopt;
}

struct Corpus {
  std::vector<LabeledPair> pairs;
  std::map<std::string, Split> split_assignment;

  Split split_of(const std::string& pair_id) const {
    const auto it = split_assignment.find(pair_id);
    return it == split_assignment.end() ? Split::Unassigned : it->second;
  }

  std::vector<const LabeledPair*> in_split(Split s) const {
    std::vector<const LabeledPair*> out;
    for (const auto& p : pairs)
      if (split_of(p.pair_id) == s) out.push_back(&p);
    return out;
  }

  // Throws when a pair id repeats or an assignment names an unknown pair.
  void validate() const {
    std::map<std::string, int> seen;
    for (const auto& p : pairs)
      if (++seen[p.pair_id] > 1) throw ConflictError("duplicate pair_id " + p.pair_id);
    for (const auto& [id, s] : split_assignment)
      if (!seen.count(id)) throw NotFoundError("split assignment for unknown pair_id " + id);
  }

  bool operator==(const Corpus&) const = default;
};

struct SplitRatios {
  double train = 0.906;
  double val = 0.047;
  double test = 0.047;

  std::array<double, 3> as_array() const { return {train, val, test}; }
};

inline SplitRatios parse_ratios(std::string_view s) {
  std::vector<double> v;
  for (const auto& part : text::split(s, ',')) {
    try {
      std::size_t used = 0;
      const std::string t(text::trim(part));
      v.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw ConfigError("bad ratio list '" + std::string(s) + "'");
    }
  }
  if (v.size() != 3) throw ConfigError("expected three ratios (train,val,test)");
  return {v[0], v[1], v[2]};
}

// Largest-remainder apportionment of n items by ratios; ties on the
// remainder go to the earlier slot.
inline std::array<std::size_t, 3> apportion(std::size_t n, const std::array<double, 3>& r) {
  std::array<std::size_t, 3> k{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    const double q = static_cast<double>(n) * r[s];
    k[s] = static_cast<std::size_t>(std::floor(q + 1e-9));
    rem[s] = q - static_cast<double>(k[s]);
    assigned += k[s];
  }
  while (assigned > n) {  // only reachable through the epsilon above
    for (std::size_t s = 3; s-- > 0;)
      if (k[s] > 0 && assigned > n) --k[s], --assigned;
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b] + 1e-12; });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % 3) {
    if (r[order[i]] <= 0.0) continue;
    ++k[order[i]];
    ++assigned;
  }
  return k;
}

struct SplitReport {
  std::vector<Relation> forced_to_train;  // classes too small to spread
};

inline Corpus stratified_split(const Corpus& in, const SplitRatios& ratios, std::uint64_t seed,
                               SplitReport* report = nullptr) {
  const auto r = ratios.as_array();
  double sum = 0.0;
  std::size_t positive = 0;
  for (double x : r) {
    if (!(x >= 0.0)) throw ConfigError("split ratios must be non-negative");
    sum += x;
    positive += x > 0.0;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw ConfigError("split ratios must sum to 1");

  Corpus out;
  out.pairs = in.pairs;
  std::array<std::vector<std::size_t>, kNumRelations> by_class;
  for (std::size_t i = 0; i < out.pairs.size(); ++i)
    by_class[index_of(out.pairs[i].label)].push_back(i);

  for (Relation c : kAllRelations) {
    auto& idx = by_class[index_of(c)];
    if (idx.empty()) continue;
    Rng rng(splitmix64(seed ^ (0x5157ULL + index_of(c))));
    std::shuffle(idx.begin(), idx.end(), rng);
    std::array<std::size_t, 3> k{idx.size(), 0, 0};
    if (idx.size() < positive) {
      if (report) report->forced_to_train.push_back(c);
    } else {
      k = apportion(idx.size(), r);
    }
    std::size_t pos = 0;
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t j = 0; j < k[s]; ++j)
        out.split_assignment[out.pairs[idx[pos++]].pair_id] = static_cast<Split>(s);
  }
  return out;
}

// Ids of `train` with minority classes topped up to the majority count.
// Originals come first in input order, then the added copies class by class.
inline std::vector<std::string> oversample(const std::vector<LabeledPair>& train,
                                           std::uint64_t seed,
                                           const std::vector<Relation>& classes = {
                                               kAllRelations.begin(), kAllRelations.end()}) {
  std::array<std::vector<std::size_t>, kNumRelations> by_class;
  for (std::size_t i = 0; i < train.size(); ++i) by_class[index_of(train[i].label)].push_back(i);
  std::size_t majority = 0;
  for (Relation c : classes) {
    if (by_class[index_of(c)].empty())
      throw DomainError("cannot oversample: class " + std::string(to_string(c)) + " is empty");
    majority = std::max(majority, by_class[index_of(c)].size());
  }
  std::vector<std::string> out;
  out.reserve(majority * classes.size());
  for (const auto& p : train) out.push_back(p.pair_id);
  Rng rng(splitmix64(seed ^ 0x0a5eULL));
  for (Relation c : classes) {
    const auto& idx = by_class[index_of(c)];
    for (std::size_t k = idx.size(); k < majority; ++k)
      out.push_back(train[idx[uniform_index(rng, idx.size())]].pair_id);
  }
  return out;
}

// ---- persistence ----

inline json to_json(const Corpus& c, const LabeledPair& p) {
  json j = labeler::to_json(p);
  j["split"] = std::string(to_string(c.split_of(p.pair_id)));
  return j;
}

inline void write_corpus(const Corpus& c, std::ostream& out) {
  for (const auto& p : c.pairs) write_jsonl_line(out, to_json(c, p));
}

inline void write_corpus(const Corpus& c, const std::string& path) {
  auto out = open_output(path);
  write_corpus(c, out);
  if (!out) throw IoError("write failed: " + path);
}

// Rows read from foreign files can carry both label sources.
struct ImportedRow {
  LabeledPair pair;
  std::optional<Relation> auto_label;
  std::optional<Relation> manual_label;
  std::optional<Split> split;
};

namespace detail {

inline const json* first_of(const json& j, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    const auto it = j.find(k);
    if (it != j.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

inline std::string as_text(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

inline std::optional<Relation> label_field(const json& j, std::initializer_list<const char*> keys,
                                           std::size_t lineno) {
  const json* v = first_of(j, keys);
  if (!v) return std::nullopt;
  if (v->is_number_integer()) {
    const auto k = v->get<std::int64_t>();
    if (k < 0 || k >= static_cast<std::int64_t>(kNumRelations))
      throw DataError("label index out of range: " + v->dump(), lineno);
    return static_cast<Relation>(k);
  }
  const auto s = as_text(*v);
  const auto r = parse_relation(text::trim(s));
  if (!r) throw DataError("unknown label '" + s + "'", lineno);
  return r;
}

}  // namespace detail

// Accepts native records and foreign ones (premise/sentence1,
// hypothesis/sentence2, label/gold_label, optional auto_label and
// manual_label). The pair label is the manual label when present.
inline ImportedRow row_from_json(const json& j, std::size_t lineno) {
  ImportedRow row;
  const json* prem = detail::first_of(j, {"premise", "sentence1", "Sentence1"});
  const json* hyp = detail::first_of(j, {"hypothesis", "sentence2", "Sentence2"});
  if (!prem || !hyp) throw DataError("missing premise or hypothesis", lineno);
  row.pair.premise = detail::as_text(*prem);
  row.pair.hypothesis = detail::as_text(*hyp);
  row.auto_label = detail::label_field(j, {"auto_label", "automatic_label"}, lineno);
  row.manual_label = detail::label_field(j, {"manual_label", "human_label"}, lineno);
  auto label = detail::label_field(j, {"label", "gold_label", "Label"}, lineno);
  if (!label) label = row.manual_label ? row.manual_label : row.auto_label;
  if (!label) throw DataError("missing label", lineno);
  row.pair.label = *label;
  if (const json* id = detail::first_of(j, {"pair_id", "id", "guid"}))
    row.pair.pair_id = detail::as_text(*id);
  else
    row.pair.pair_id = "row-" + std::to_string(lineno);
  if (j.contains("cue") && !j["cue"].is_null()) row.pair.cue = labeler::phrase_from_json(j["cue"]);
  if (j.contains("source") && !j["source"].is_null())
    row.pair.source = labeler::provenance_from_json(j["source"]);
  if (const json* s = detail::first_of(j, {"split"})) {
    row.split = parse_split(detail::as_text(*s));
    if (!row.split) throw DataError("unknown split '" + detail::as_text(*s) + "'", lineno);
  }
  return row;
}

// Tab-separated with a header row naming the columns.
inline std::vector<ImportedRow> read_tsv_rows(std::istream& in) {
  std::vector<ImportedRow> rows;
  std::string line;
  std::vector<std::string> header;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = text::split(line, '\t');
    if (header.empty()) {
      for (auto& h : cols) header.push_back(text::to_lower(text::trim(h)));
      continue;
    }
    if (cols.size() != header.size())
      throw DataError("expected " + std::to_string(header.size()) + " columns, got " +
                          std::to_string(cols.size()),
                      lineno);
    json j = json::object();
    for (std::size_t k = 0; k < cols.size(); ++k) j[header[k]] = cols[k];
    rows.push_back(row_from_json(j, lineno));
  }
  return rows;
}

inline std::vector<ImportedRow> read_rows(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  if (text::ends_with(path, ".tsv") || text::ends_with(path, ".txt")) return read_tsv_rows(in);
  std::vector<ImportedRow> rows;
  char first = 0;
  while (in.get(first) && std::isspace(static_cast<unsigned char>(first))) {
  }
  in.clear();
  in.seekg(0);
  if (first == '[') {  // a single JSON array
    json arr;
    try {
      arr = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    std::size_t k = 0;
    for (const auto& j : arr) rows.push_back(row_from_json(j, ++k));
    return rows;
  }
  read_jsonl(in, [&](const json& j, std::size_t lineno) { rows.push_back(row_from_json(j, lineno)); });
  return rows;
}

inline Corpus corpus_from_rows(const std::vector<ImportedRow>& rows) {
  Corpus c;
  for (const auto& r : rows) {
    c.pairs.push_back(r.pair);
    if (r.split && *r.split != Split::Unassigned) c.split_assignment[r.pair.pair_id] = *r.split;
  }
  c.validate();
  return c;
}

inline Corpus read_corpus(const std::string& path) { return corpus_from_rows(read_rows(path)); }

inline void write_tsv(const Corpus& c, std::ostream& out) {
  auto clean = [](std::string s) {
    std::replace(s.begin(), s.end(), '\t', ' ');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
  };
  out << "pair_id\tpremise\thypothesis\tlabel\tsplit\n";
  for (const auto& p : c.pairs)
    out << clean(p.pair_id) << '\t' << clean(p.premise) << '\t' << clean(p.hypothesis) << '\t'
        << to_string(p.label) << '\t' << to_string(c.split_of(p.pair_id)) << '\n';
}

}  // namespace nlif::corpus
