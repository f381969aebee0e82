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
#include <optional>
#include <string>

#include "nlifoundry/core/hash.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/relation.hpp"
#include "nlifoundry/labeler/phrase_table.hpp"

namespace nlif::labeler {

// Where a pair came from in the source text.
struct Provenance {
  std::int64_t article_id = 0;
  std::string section_path;
  std::int64_t premise_index = 0;
  std::int64_t hypothesis_article_id = 0;
  std::int64_t hypothesis_index = 0;
  // A linking phrase that opened the premise; it does not affect the label.
  std::optional<std::string> premise_cue;

  bool operator==(const Provenance&) const = default;
};

struct LabeledPair {
  std::string pair_id;
  std::string premise;
  std::string hypothesis;
  Relation label = Relation::Neutral;
  std::optional<LinkingPhrase> cue;
  std::optional<Provenance> source;

  bool operator==(const LabeledPair&) const = default;
};

// Stable across runs and platforms.
inline std::string make_pair_id(std::int64_t article_id, std::string_view section_path,
                                std::int64_t premise_index) {
  std::string key = std::to_string(article_id);
  key.push_back('\x1f');
  key.append(section_path);
  key.push_back('\x1f');
  key += std::to_string(premise_index);
  return "p" + hex64(fnv1a64(key));
}

inline json to_json(const LinkingPhrase& p) {
  return json{{"surface", p.surface},
              {"category", std::string(to_string(p.category))},
              {"normalized", p.normalized}};
}

inline LinkingPhrase phrase_from_json(const json& j) {
  return LinkingPhrase{j.at("surface").get<std::string>(),
                       relation_from_string(j.at("category").get<std::string>()),
                       j.at("normalized").get<std::string>()};
}

inline json to_json(const Provenance& p) {
  json j{{"article_id", p.article_id},
         {"section_path", p.section_path},
         {"premise_index", p.premise_index},
         {"hypothesis_article_id", p.hypothesis_article_id},
         {"hypothesis_index", p.hypothesis_index}};
  j["premise_cue"] = p.premise_cue ? json(*p.premise_cue) : json(nullptr);
  return j;
}

inline Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.article_id = j.at("article_id").get<std::int64_t>();
  p.section_path = j.at("section_path").get<std::string>();
  p.premise_index = j.at("premise_index").get<std::int64_t>();
  p.hypothesis_article_id = j.value("hypothesis_article_id", p.article_id);
  p.hypothesis_index = j.value("hypothesis_index", p.premise_index + 1);
  if (j.contains("premise_cue") && !j["premise_cue"].is_null())
    p.premise_cue = j["premise_cue"].get<std::string>();
  return p;
}

inline json to_json(const LabeledPair& p) {
  json j{{"pair_id", p.pair_id},
         {"premise", p.premise},
         {"hypothesis", p.hypothesis},
         {"label", std::string(to_string(p.label))}};
  j["cue"] = p.cue ? to_json(*p.cue) : json(nullptr);
  j["source"] = p.source ? to_json(*p.source) : json(nullptr);
  return j;
}

inline LabeledPair pair_from_json(const json& j) {
  LabeledPair p;
  p.pair_id = j.at("pair_id").get<std::string>();
  p.premise = j.at("premise").get<std::string>();
  p.hypothesis = j.at("hypothesis").get<std::string>();
  p.label = relation_from_string(j.at("label").get<std::string>());
  if (j.contains("cue") && !j["cue"].is_null()) p.cue = phrase_from_json(j["cue"]);
  if (j.contains("source") && !j["source"].is_null()) p.source = provenance_from_json(j["source"]);
  return p;
}

}  // namespace nlif::labeler
