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

// Per-example scores for the scored schedules; lower means easier.

#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "nlifoundry/cartography/cartography.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/text.hpp"
#include "nlifoundry/curriculum/schedule.hpp"
#include "nlifoundry/labeler/labeled_pair.hpp"

namespace nlif::curriculum {

using ScoreMap = std::unordered_map<std::string, double>;

// Premise plus hypothesis word count.
inline ScoreMap length_scores(const std::vector<labeler::LabeledPair>& pairs) {
  ScoreMap out;
  for (const auto& p : pairs)
    out[p.pair_id] =
        static_cast<double>(text::words(p.premise).size() + text::words(p.hypothesis).size());
  return out;
}

// Most similar first: the score is the negated similarity.
inline ScoreMap similarity_scores(const std::unordered_map<std::string, double>& similarity) {
  ScoreMap out;
  for (const auto& [id, s] : similarity) out[id] = -s;
  return out;
}

// Reads {"example_id"|"pair_id": ..., "similarity": ...} lines.
inline std::unordered_map<std::string, double> read_similarity(const std::string& path) {
  std::unordered_map<std::string, double> out;
  read_jsonl_file(path, [&](const json& j, std::size_t) {
    const std::string id =
        j.contains("example_id") ? j["example_id"].get<std::string>() : j.at("pair_id").get<std::string>();
    out[id] = j.at("similarity").get<double>();
  });
  return out;
}

inline ScoreMap cartography_scores(const std::vector<cartography::CartographyPoint>& points) {
  ScoreMap out;
  for (const auto& p : points) out[p.example_id] = p.score;
  return out;
}

// Group pools from a data map, each member once.
inline GroupPools group_pools(const std::vector<cartography::CartographyPoint>& points) {
  GroupPools g;
  for (const auto& p : points) {
    if (p.groups & cartography::kE2L) g.e2l.push_back(p.example_id);
    if (p.groups & cartography::kAmbiguous) g.ambiguous.push_back(p.example_id);
    if (p.groups & cartography::kH2L) g.h2l.push_back(p.example_id);
  }
  return g;
}

// Tops up every class present in `ids` to the count of its largest class,
// drawing copies uniformly with replacement. Classes absent from the pool
// stay absent.
inline std::vector<std::string> balance_pool(const std::vector<std::string>& ids,
                                             const std::unordered_map<std::string, Relation>& labels,
                                             std::uint64_t seed) {
  std::array<std::vector<std::string>, kNumRelations> by_class;
  for (const auto& id : ids) {
    const auto it = labels.find(id);
    if (it == labels.end()) throw NotFoundError("no label for example " + id);
    by_class[index_of(it->second)].push_back(id);
  }
  std::size_t majority = 0;
  for (const auto& v : by_class) majority = std::max(majority, v.size());
  std::vector<std::string> out(ids);
  Rng rng(splitmix64(seed ^ 0xba1a7ceULL));
  for (const auto& v : by_class) {
    if (v.empty()) continue;
    for (std::size_t k = v.size(); k < majority; ++k) out.push_back(v[uniform_index(rng, v.size())]);
  }
  return out;
}

inline GroupPools balance_groups(const GroupPools& g,
                                 const std::unordered_map<std::string, Relation>& labels,
                                 std::uint64_t seed) {
  return GroupPools{balance_pool(g.e2l, labels, seed), balance_pool(g.ambiguous, labels, seed + 1),
                    balance_pool(g.h2l, labels, seed + 2)};
}

}  // namespace nlif::curriculum
