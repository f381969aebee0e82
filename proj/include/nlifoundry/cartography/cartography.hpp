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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/relation.hpp"
#include "nlifoundry/core/text.hpp"
#include "nlifoundry/curriculum/difficulty.hpp"

namespace nlif::cartography {

struct DynamicsRecord {
  std::string example_id;
  std::int64_t epoch = 0;
  double gold_prob = 0.0;
  Relation predicted_label = Relation::Neutral;

  bool operator==(const DynamicsRecord&) const = default;
};

inline json to_json(const DynamicsRecord& r) {
  return json{{"example_id", r.example_id},
              {"epoch", r.epoch},
              {"gold_prob", r.gold_prob},
              {"predicted_label", std::string(to_string(r.predicted_label))}};
}

inline DynamicsRecord record_from_json(const json& j) {
  return DynamicsRecord{j.at("example_id").get<std::string>(), j.at("epoch").get<std::int64_t>(),
                        j.at("gold_prob").get<double>(),
                        relation_from_string(j.at("predicted_label").get<std::string>())};
}

inline std::vector<DynamicsRecord> read_dynamics(const std::string& path) {
  std::vector<DynamicsRecord> out;
  read_jsonl_file(path, [&](const json& j, std::size_t) { out.push_back(record_from_json(j)); });
  return out;
}

enum Group : unsigned { kE2L = 1u, kAmbiguous = 2u, kH2L = 4u };

inline std::string groups_to_string(unsigned g) {
  std::string s;
  auto add = [&](const char* name) {
    if (!s.empty()) s.push_back('|');
    s += name;
  };
  if (g & kE2L) add("E2L");
  if (g & kAmbiguous) add("A");
  if (g & kH2L) add("H2L");
  return s;
}

inline unsigned groups_from_string(std::string_view s) {
  unsigned g = 0;
  for (const auto& part : text::split(s, '|')) {
    const auto t = text::trim(part);
    if (t.empty()) continue;
    if (t == "E2L") g |= kE2L;
    else if (t == "A") g |= kAmbiguous;
    else if (t == "H2L") g |= kH2L;
    else throw DomainError("unknown group '" + std::string(t) + "'");
  }
  return g;
}

struct CartographyPoint {
  std::string example_id;
  double confidence = 0.0;
  double variability = 0.0;
  double correctness = 0.0;
  unsigned groups = 0;
  double score = 0.0;
};

// One point per example, in order of first appearance. Every example must
// carry the same set of at least two epochs.
inline std::vector<CartographyPoint> compute_points(
    const std::vector<DynamicsRecord>& records,
    const std::unordered_map<std::string, Relation>& gold) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<const DynamicsRecord*>> by_id;
  for (const auto& r : records) {
    if (!(r.gold_prob >= 0.0 && r.gold_prob <= 1.0))
      throw DomainError("gold_prob outside [0, 1] for example " + r.example_id);
    auto [it, inserted] = by_id.try_emplace(r.example_id);
    if (inserted) order.push_back(r.example_id);
    it->second.push_back(&r);
  }
  std::vector<std::int64_t> epochs;
  std::vector<CartographyPoint> out;
  out.reserve(order.size());
  for (const auto& id : order) {
    auto& recs = by_id[id];
    std::sort(recs.begin(), recs.end(),
              [](const DynamicsRecord* a, const DynamicsRecord* b) { return a->epoch < b->epoch; });
    std::vector<std::int64_t> ep;
    for (const auto* r : recs) ep.push_back(r->epoch);
    if (std::adjacent_find(ep.begin(), ep.end()) != ep.end())
      throw DomainError("duplicate epoch record for example " + id);
    if (epochs.empty()) {
      epochs = ep;
      if (epochs.size() < 2) throw DomainError("at least two epochs are required");
    } else if (ep != epochs) {
      throw DomainError("example " + id + " does not have records for the same epochs");
    }
    const auto g = gold.find(id);
    if (g == gold.end()) throw NotFoundError("no gold label for example " + id);
    const double n = static_cast<double>(recs.size());
    double mean = 0.0, correct = 0.0;
    for (const auto* r : recs) {
      mean += r->gold_prob;
      correct += r->predicted_label == g->second;
    }
    mean /= n;
    double var = 0.0;
    for (const auto* r : recs) var += (r->gold_prob - mean) * (r->gold_prob - mean);
    CartographyPoint p;
    p.example_id = id;
    p.confidence = std::clamp(mean, 0.0, 1.0);
    p.variability = std::sqrt(var / n);
    p.correctness = correct / n;
    p.score = curriculum::difficulty_score(p.confidence, std::min(p.variability, 1.0));
    out.push_back(std::move(p));
  }
  return out;
}

// Rank-based groups of ceil(f*n) points each; groups may overlap and leave
// points out. Ties go to the lexicographically smaller example_id.
inline void assign_groups(std::vector<CartographyPoint>& points, double fraction = 1.0 / 3.0) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ConfigError("group fraction must be in (0, 1]");
  const std::size_t n = points.size();
  const std::size_t k =
      std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> idx(n);
  auto take = [&](auto better, unsigned group) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const auto& pa = points[a];
      const auto& pb = points[b];
      if (better(pa, pb)) return true;
      if (better(pb, pa)) return false;
      return pa.example_id < pb.example_id;
    });
    for (std::size_t i = 0; i < k; ++i) points[idx[i]].groups |= group;
  };
  for (auto& p : points) p.groups = 0;
  take([](const auto& a, const auto& b) { return a.confidence > b.confidence; }, kE2L);
  take([](const auto& a, const auto& b) { return a.confidence < b.confidence; }, kH2L);
  take([](const auto& a, const auto& b) { return a.variability > b.variability; }, kAmbiguous);
}

// ---- data map files ----

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::vector<std::string> parse_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw DataError("unterminated quote", lineno);
  out.push_back(std::move(cur));
  return out;
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kMapHeader = "example_id,confidence,variability,correctness,groups,score";

inline void write_map_csv(const std::vector<CartographyPoint>& points, std::ostream& out) {
  out << kMapHeader << '\n';
  for (const auto& p : points)
    out << detail::csv_field(p.example_id) << ',' << detail::fmt_double(p.confidence) << ','
        << detail::fmt_double(p.variability) << ',' << detail::fmt_double(p.correctness) << ','
        << groups_to_string(p.groups) << ',' << detail::fmt_double(p.score) << '\n';
}

inline void write_map_csv(const std::vector<CartographyPoint>& points, const std::string& path) {
  auto out = open_output(path);
  write_map_csv(points, out);
  if (!out) throw IoError("write failed: " + path);
}

inline std::vector<CartographyPoint> read_map_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<CartographyPoint> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != kMapHeader) throw DataError("unexpected data map header", lineno);
      continue;
    }
    if (line.empty()) continue;
    const auto f = detail::parse_csv_line(line, lineno);
    if (f.size() != 6) throw DataError("expected 6 columns", lineno);
    try {
      CartographyPoint p;
      p.example_id = f[0];
      p.confidence = std::stod(f[1]);
      p.variability = std::stod(f[2]);
      p.correctness = std::stod(f[3]);
      p.groups = groups_from_string(f[4]);
      p.score = std::stod(f[5]);
      out.push_back(std::move(p));
    } catch (const std::logic_error&) {
      throw DataError("bad number", lineno);
    } catch (const DomainError& e) {
      throw DataError(e.what(), lineno);
    }
  }
  return out;
}

// Scatter of confidence against variability, colored by correctness bin,
// with histograms of the three statistics underneath.
inline void write_map_svg(const std::vector<CartographyPoint>& points, std::ostream& out) {
  constexpr double W = 720, PX = 60, PY = 30, PW = 420, PH = 420;
  constexpr double HY = 520, HW = 200, HH = 120, HG = 30;
  constexpr int kBins = 10;
  const char* colors[] = {"#b2182b", "#ef8a62", "#fddbc7", "#d1e5f0", "#67a9cf", "#2166ac"};
  double vmax = 0.5;
  for (const auto& p : points) vmax = std::max(vmax, p.variability);
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"680\" "
      << "font-family=\"sans-serif\" font-size=\"11\">\n";
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#333\"/>\n",
                PX, PY, PW, PH);
  out << buf;
  out << "<text x=\"" << PX + PW / 2 << "\" y=\"" << PY + PH + 28
      << "\" text-anchor=\"middle\">variability</text>\n";
  out << "<text x=\"18\" y=\"" << PY + PH / 2 << "\" transform=\"rotate(-90 18 " << PY + PH / 2
      << ")\" text-anchor=\"middle\">confidence</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.2f</text>\n"
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.2f</text>\n",
                  PX - 4, PY + PH - f * PH + 4, f, PX + f * PW, PY + PH + 14, f * vmax);
    out << buf;
  }
  for (const auto& p : points) {
    const int bin = std::clamp(static_cast<int>(p.correctness * 5.0 + 1e-9), 0, 5);
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\" fill-opacity=\"0.8\"/>\n",
                  PX + p.variability / vmax * PW, PY + PH - p.confidence * PH, colors[bin]);
    out << buf;
  }
  for (int b = 0; b <= 5; ++b) {
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%g\" cy=\"%g\" r=\"5\" fill=\"%s\"/>"
                  "<text x=\"%g\" y=\"%g\">correct %.1f</text>\n",
                  PX + PW + 30, PY + 20 + b * 18, colors[b], PX + PW + 40, PY + 24 + b * 18,
                  b / 5.0);
    out << buf;
  }
  const char* names[] = {"confidence", "variability", "correctness"};
  for (int h = 0; h < 3; ++h) {
    std::array<int, kBins> counts{};
    const double top = h == 1 ? vmax : 1.0;
    for (const auto& p : points) {
      const double v = h == 0 ? p.confidence : h == 1 ? p.variability : p.correctness;
      ++counts[std::clamp(static_cast<int>(v / top * kBins), 0, kBins - 1)];
    }
    const int peak = std::max(1, *std::max_element(counts.begin(), counts.end()));
    const double x0 = PX + h * (HW + HG);
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#333\"/>"
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n",
                  x0, HY, HW, HH, x0 + HW / 2, HY + HH + 16, names[h]);
    out << buf;
    for (int b = 0; b < kBins; ++b) {
      const double bh = HH * counts[b] / peak;
      std::snprintf(buf, sizeof(buf),
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"#4d7ea8\"/>\n",
                    x0 + b * HW / kBins + 1, HY + HH - bh, HW / kBins - 2, bh);
      out << buf;
    }
  }
  out << "</svg>\n";
}

inline void write_map_svg(const std::vector<CartographyPoint>& points, const std::string& path) {
  auto out = open_output(path);
  write_map_svg(points, out);
  if (!out) throw IoError("write failed: " + path);
}

// Per-group class counts, for the group distribution table.
inline std::map<std::string, std::array<std::size_t, kNumRelations>> group_distribution(
    const std::vector<CartographyPoint>& points,
    const std::unordered_map<std::string, Relation>& gold) {
  std::map<std::string, std::array<std::size_t, kNumRelations>> out;
  for (const char* g : {"E2L", "A", "H2L"}) out[g] = {};
  for (const auto& p : points) {
    const auto it = gold.find(p.example_id);
    if (it == gold.end()) continue;
    if (p.groups & kE2L) ++out["E2L"][index_of(it->second)];
    if (p.groups & kAmbiguous) ++out["A"][index_of(it->second)];
    if (p.groups & kH2L) ++out["H2L"][index_of(it->second)];
  }
  return out;
}

}  // namespace nlif::cartography
