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
#include <optional>
#include <string>
#include <string_view>

#include "nlifoundry/core/error.hpp"

namespace nlif {

// Sentence-pair relation. The enumerator order is the canonical class order
// used by models, confusion matrices and argmax tie-breaking.
enum class Relation { Contrastive = 0, Entailment = 1, Reasoning = 2, Neutral = 3 };

inline constexpr std::size_t kNumRelations = 4;

inline constexpr std::array<Relation, kNumRelations> kAllRelations = {
    Relation::Contrastive, Relation::Entailment, Relation::Reasoning, Relation::Neutral};

inline constexpr std::size_t index_of(Relation r) { return static_cast<std::size_t>(r); }

inline constexpr std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Contrastive: return "contrastive";
    case Relation::Entailment: return "entailment";
    case Relation::Reasoning: return "reasoning";
    case Relation::Neutral: return "neutral";
  }
  return "neutral";
}

// Accepts the serialization strings case-insensitively; "causal" is an alias
// of reasoning.
inline std::optional<Relation> parse_relation(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "contrastive") return Relation::Contrastive;
  if (lower == "entailment") return Relation::Entailment;
  if (lower == "reasoning" || lower == "causal") return Relation::Reasoning;
  if (lower == "neutral") return Relation::Neutral;
  return std::nullopt;
}

inline Relation relation_from_string(std::string_view s) {
  auto r = parse_relation(s);
  if (!r) throw DomainError("unknown relation label '" + std::string(s) + "'");
  return *r;
}

}  // namespace nlif
