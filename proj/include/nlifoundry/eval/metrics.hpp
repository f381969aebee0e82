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
#include <map>
#include <string>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/relation.hpp"

namespace nlif::eval {

inline constexpr const char* kReportSchema = "nlifoundry.eval/1";

struct ClassScores {
  Relation label = Relation::Neutral;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  std::vector<Relation> classes;
  std::vector<ClassScores> per_class;  // same order as classes
  // confusion[g][p]: gold class g predicted as p, indexed like classes.
  std::vector<std::vector<std::size_t>> confusion;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::size_t n = 0;
};

inline double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

inline EvalReport classification_report(const std::vector<Relation>& gold,
                                        const std::vector<Relation>& pred,
                                        const std::vector<Relation>& classes = {
                                            kAllRelations.begin(), kAllRelations.end()}) {
  if (gold.size() != pred.size())
    throw DomainError("gold and prediction lengths differ: " + std::to_string(gold.size()) +
                      " vs " + std::to_string(pred.size()));
  if (classes.empty()) throw DomainError("empty class set");
  std::array<int, kNumRelations> pos;
  pos.fill(-1);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (pos[index_of(classes[k])] >= 0) throw DomainError("duplicate class in class set");
    pos[index_of(classes[k])] = static_cast<int>(k);
  }
  const std::size_t K = classes.size();
  EvalReport r;
  r.classes = classes;
  r.n = gold.size();
  r.confusion.assign(K, std::vector<std::size_t>(K, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const int g = pos[index_of(gold[i])];
    const int p = pos[index_of(pred[i])];
    if (g < 0 || p < 0)
      throw DomainError("label outside the class set at position " + std::to_string(i));
    ++r.confusion[g][p];
  }
  std::size_t correct = 0;
  double f1_sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    std::size_t tp = r.confusion[k][k], col = 0, row = 0;
    for (std::size_t j = 0; j < K; ++j) {
      col += r.confusion[j][k];
      row += r.confusion[k][j];
    }
    ClassScores s;
    s.label = classes[k];
    s.support = row;
    s.precision = safe_div(static_cast<double>(tp), static_cast<double>(col));
    s.recall = safe_div(static_cast<double>(tp), static_cast<double>(row));
    s.f1 = safe_div(2.0 * s.precision * s.recall, s.precision + s.recall);
    f1_sum += s.f1;
    correct += tp;
    r.per_class.push_back(s);
  }
  r.micro_f1 = safe_div(static_cast<double>(correct), static_cast<double>(r.n));
  r.macro_f1 = f1_sum / static_cast<double>(K);
  return r;
}

inline json to_json(const EvalReport& r) {
  json pc = json::object();
  for (const auto& s : r.per_class)
    pc[std::string(to_string(s.label))] = {{"precision", s.precision},
                                           {"recall", s.recall},
                                           {"f1", s.f1},
                                           {"support", s.support}};
  json classes = json::array();
  for (Relation c : r.classes) classes.push_back(std::string(to_string(c)));
  return json{{"schema", kReportSchema}, {"n", r.n},
              {"classes", classes},      {"per_class", pc},
              {"micro_f1", r.micro_f1},  {"macro_f1", r.macro_f1},
              {"confusion", r.confusion}};
}

// Pairs gold and predicted labels by id. Every gold id needs a prediction.
inline std::pair<std::vector<Relation>, std::vector<Relation>> align_by_id(
    const std::vector<std::pair<std::string, Relation>>& gold,
    const std::map<std::string, Relation>& pred) {
  std::vector<Relation> g, p;
  g.reserve(gold.size());
  p.reserve(gold.size());
  for (const auto& [id, label] : gold) {
    const auto it = pred.find(id);
    if (it == pred.end()) throw NotFoundError("no prediction for pair " + id);
    g.push_back(label);
    p.push_back(it->second);
  }
  return {g, p};
}

}  // namespace nlif::eval
