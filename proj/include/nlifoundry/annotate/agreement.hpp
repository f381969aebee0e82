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

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/relation.hpp"

namespace nlif::annotate {

// Strict majority (more than half the votes) or nothing.
inline std::optional<Relation> aggregate(const std::vector<Relation>& votes) {
  std::array<std::size_t, kNumRelations> count{};
  for (Relation r : votes) ++count[index_of(r)];
  for (Relation r : kAllRelations)
    if (2 * count[index_of(r)] > votes.size()) return r;
  return std::nullopt;
}

// votes[i][j]: raters who put item i in category j. Every row must sum to
// the same n >= 2. A zero denominator yields 1 under perfect observed
// agreement and 0 otherwise.
inline double fleiss_kappa(const std::vector<std::vector<std::size_t>>& votes) {
  if (votes.empty()) throw DomainError("fleiss_kappa needs at least one item");
  const std::size_t k = votes.front().size();
  if (k == 0) throw DomainError("fleiss_kappa needs at least one category");
  std::size_t n = 0;
  for (std::size_t j = 0; j < k; ++j) n += votes.front()[j];
  if (n < 2) throw DomainError("fleiss_kappa needs at least two ratings per item");
  std::vector<double> col(k, 0.0);
  double p_bar = 0.0;
  const double dn = static_cast<double>(n);
  for (const auto& row : votes) {
    if (row.size() != k) throw DomainError("ragged vote matrix: category counts differ");
    std::size_t total = 0;
    double sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      total += row[j];
      sq += static_cast<double>(row[j]) * static_cast<double>(row[j]);
      col[j] += static_cast<double>(row[j]);
    }
    if (total != n) throw DomainError("ragged vote matrix: items have different rating counts");
    p_bar += (sq - dn) / (dn * (dn - 1.0));
  }
  const double N = static_cast<double>(votes.size());
  p_bar /= N;
  double p_e = 0.0;
  for (double c : col) {
    const double p = c / (N * dn);
    p_e += p * p;
  }
  if (std::abs(1.0 - p_e) < 1e-15) return std::abs(p_bar - 1.0) < 1e-12 ? 1.0 : 0.0;
  return (p_bar - p_e) / (1.0 - p_e);
}

inline double cohen_kappa(const std::vector<Relation>& a, const std::vector<Relation>& b) {
  if (a.size() != b.size()) throw DomainError("cohen_kappa: sequences differ in length");
  if (a.empty()) throw DomainError("cohen_kappa: empty sequences");
  std::array<double, kNumRelations> ma{}, mb{};
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma[index_of(a[i])] += 1.0;
    mb[index_of(b[i])] += 1.0;
    agree += a[i] == b[i];
  }
  const double n = static_cast<double>(a.size());
  const double p_o = agree / n;
  double p_e = 0.0;
  for (std::size_t k = 0; k < kNumRelations; ++k) p_e += (ma[k] / n) * (mb[k] / n);
  if (std::abs(1.0 - p_e) < 1e-15) return std::abs(p_o - 1.0) < 1e-12 ? 1.0 : 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

struct AgreementReport {
  std::optional<double> fleiss_kappa;                // over complete items
  std::optional<double> cohen_kappa_auto_vs_manual;  // over complete items with an auto label
  // confusion[auto][final]
  std::array<std::array<std::size_t, kNumRelations>, kNumRelations> confusion{};
  std::size_t complete_count = 0;
  std::size_t discarded_count = 0;
};

inline json to_json(const AgreementReport& r) {
  json conf = json::object();
  for (Relation a : kAllRelations) {
    json row = json::object();
    for (Relation f : kAllRelations)
      row[std::string(to_string(f))] = r.confusion[index_of(a)][index_of(f)];
    conf[std::string(to_string(a))] = row;
  }
  json j{{"confusion_auto_vs_final", conf},
         {"complete_count", r.complete_count},
         {"discarded_count", r.discarded_count}};
  j["fleiss_kappa"] = r.fleiss_kappa ? json(*r.fleiss_kappa) : json(nullptr);
  j["cohen_kappa_auto_vs_manual"] =
      r.cohen_kappa_auto_vs_manual ? json(*r.cohen_kappa_auto_vs_manual) : json(nullptr);
  return j;
}

}  // namespace nlif::annotate
