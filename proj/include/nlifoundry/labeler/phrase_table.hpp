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

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/relation.hpp"
#include "nlifoundry/core/text.hpp"
#include "nlifoundry/ingest/normalize.hpp"

namespace nlif::labeler {

struct LinkingPhrase {
  std::string surface;
  Relation category = Relation::Reasoning;
  std::string normalized;  // matching key: normalize_text + lowercase

  bool operator==(const LinkingPhrase&) const = default;
};

inline std::string phrase_key(std::string_view surface) {
  return text::to_lower(ingest::normalize_text(surface));
}

struct PhraseOverrides {
  std::vector<std::pair<Relation, std::string>> add;
  std::vector<std::string> remove;  // surfaces, compared by phrase_key
};

// Built-in Romanian inventory: 19 contrastive, 19 entailment, 24 reasoning.
inline const std::vector<std::pair<Relation, std::string_view>>& builtin_phrases() {
  static const std::vector<std::pair<Relation, std::string_view>> kPhrases = {
      {Relation::Contrastive, "Pe de altă parte"},
      {Relation::Contrastive, "În contrast"},
      {Relation::Contrastive, "În ciuda acestui fapt"},
      {Relation::Contrastive, "În opoziție"},
      {Relation::Contrastive, "În contradicție"},
      {Relation::Contrastive, "În ciuda acestui lucru"},
      {Relation::Contrastive, "În ciuda acestor fapte"},
      {Relation::Contrastive, "În ciuda acestor lucruri"},
      {Relation::Contrastive, "În mod contrar"},
      {Relation::Contrastive, "Pe de cealaltă parte"},
      {Relation::Contrastive, "Cu toate acestea însă"},
      {Relation::Contrastive, "Contrastând"},
      {Relation::Contrastive, "În dezacord"},
      {Relation::Contrastive, "În sens opus"},
      {Relation::Contrastive, "În antiteza"},
      {Relation::Contrastive, "În contradictoriu"},
      {Relation::Contrastive, "Într-un contrast"},
      {Relation::Contrastive, "Contrar convingerilor"},
      {Relation::Contrastive, "În pofida acestor lucruri"},

      {Relation::Entailment, "Cu alte cuvinte"},
      {Relation::Entailment, "Adică"},
      {Relation::Entailment, "În esență"},
      {Relation::Entailment, "Altfel spus"},
      {Relation::Entailment, "Asta înseamnă că"},
      {Relation::Entailment, "În fond"},
      {Relation::Entailment, "Sintetizând"},
      {Relation::Entailment, "Rezumând"},
      {Relation::Entailment, "În rezumat"},
      {Relation::Entailment, "În termeni simpli"},
      {Relation::Entailment, "În traducere liberă"},
      {Relation::Entailment, "Mai pe scurt"},
      {Relation::Entailment, "În alți termeni"},
      {Relation::Entailment, "Simplificând"},
      {Relation::Entailment, "Simplu spus"},
      {Relation::Entailment, "Mai concis"},
      {Relation::Entailment, "Pe larg"},
      {Relation::Entailment, "În termeni populari"},
      {Relation::Entailment, "Într-o altă formulare"},

      {Relation::Reasoning, "Astfel"},
      {Relation::Reasoning, "Prin urmare"},
      {Relation::Reasoning, "Ca urmare"},
      {Relation::Reasoning, "În consecință"},
      {Relation::Reasoning, "Așadar"},
      {Relation::Reasoning, "Drept urmare"},
      {Relation::Reasoning, "În acest fel"},
      {Relation::Reasoning, "Ca rezultat"},
      {Relation::Reasoning, "Din această cauză"},
      {Relation::Reasoning, "Astfel că"},
      {Relation::Reasoning, "În concluzie"},
      {Relation::Reasoning, "Rezultatul este"},
      {Relation::Reasoning, "În rezultat"},
      {Relation::Reasoning, "Din această cauza"},
      {Relation::Reasoning, "Concluzionând"},
      {Relation::Reasoning, "Pentru a finaliza"},
      {Relation::Reasoning, "Ca o consecință a acestui fapt"},
      {Relation::Reasoning, "Într-o concluzie"},
      {Relation::Reasoning, "Ceea ce a dus la"},
      {Relation::Reasoning, "Ducând la"},
      {Relation::Reasoning, "Conducând la"},
      {Relation::Reasoning, "Provocând astfel"},
      {Relation::Reasoning, "Se poate concluziona că"},
      {Relation::Reasoning, "Ținând cont de acestea"},
  };
  return kPhrases;
}

// Category -> linking phrase inventory with a byte trie over the normalized
// keys for longest-prefix lookup.
class PhraseTable {
 public:
  struct Match {
    std::size_t phrase;     // index into phrases()
    std::size_t key_bytes;  // length of the matched key in the lowered text
  };

  PhraseTable() { nodes_.emplace_back(); }

  void add(Relation category, std::string_view surface) {
    if (category == Relation::Neutral)
      throw ConfigError("linking phrase '" + std::string(surface) + "' cannot be neutral");
    const auto trimmed = text::trim(surface);
    if (trimmed.empty()) throw ConfigError("empty linking phrase");
    LinkingPhrase p{ingest::normalize_text(trimmed), category, phrase_key(trimmed)};
    for (const auto& q : phrases_) {
      if (q.normalized == p.normalized) {
        throw ConfigError("duplicate linking phrase '" + p.surface + "' (" +
                          std::string(to_string(q.category)) + ")");
      }
    }
    phrases_.push_back(std::move(p));
    rebuild();
  }

  bool remove(std::string_view surface) {
    const auto key = phrase_key(text::trim(surface));
    for (auto it = phrases_.begin(); it != phrases_.end(); ++it) {
      if (it->normalized == key) {
        phrases_.erase(it);
        rebuild();
        return true;
      }
    }
    return false;
  }

  const std::vector<LinkingPhrase>& phrases() const { return phrases_; }
  std::size_t size() const { return phrases_.size(); }

  std::size_t count(Relation category) const {
    std::size_t n = 0;
    for (const auto& p : phrases_) n += p.category == category;
    return n;
  }

  const LinkingPhrase* find(std::string_view surface) const {
    const auto key = phrase_key(surface);
    for (const auto& p : phrases_)
      if (p.normalized == key) return &p;
    return nullptr;
  }

  // Longest key that prefixes `lowered` and is followed by a space, a comma,
  // a colon or the end of the text.
  std::optional<Match> longest_prefix(std::string_view lowered) const {
    std::optional<Match> best;
    int node = 0;
    for (std::size_t i = 0; i < lowered.size(); ++i) {
      const auto it = nodes_[node].next.find(static_cast<unsigned char>(lowered[i]));
      if (it == nodes_[node].next.end()) break;
      node = it->second;
      const int phrase = nodes_[node].phrase;
      if (phrase >= 0) {
        const std::size_t end = i + 1;
        if (end == lowered.size() || lowered[end] == ' ' || lowered[end] == ',' ||
            lowered[end] == ':')
          best = Match{static_cast<std::size_t>(phrase), end};
      }
    }
    return best;
  }

 private:
  struct Node {
    std::map<unsigned char, int> next;
    int phrase = -1;
  };

  void rebuild() {
    nodes_.assign(1, Node{});
    for (std::size_t i = 0; i < phrases_.size(); ++i) {
      int node = 0;
      for (unsigned char c : phrases_[i].normalized) {
        auto it = nodes_[node].next.find(c);
        if (it == nodes_[node].next.end()) {
          nodes_.emplace_back();
          const int child = static_cast<int>(nodes_.size() - 1);
          nodes_[node].next.emplace(c, child);
          node = child;
        } else {
          node = it->second;
        }
      }
      nodes_[node].phrase = static_cast<int>(i);
    }
  }

  std::vector<LinkingPhrase> phrases_;
  std::vector<Node> nodes_;
};

inline PhraseTable load_phrase_table(const PhraseOverrides& overrides = {}) {
  PhraseTable table;
  for (const auto& [category, surface] : builtin_phrases()) table.add(category, surface);
  for (const auto& surface : overrides.remove) {
    if (!table.remove(surface))
      throw ConfigError("cannot remove unknown linking phrase '" + surface + "'");
  }
  for (const auto& [category, surface] : overrides.add) table.add(category, surface);
  return table;
}

// Override file, one directive per line:
//   add <TAB> <category> <TAB> <phrase>
//   remove <TAB> <phrase>
// Blank lines and lines starting with '#' are ignored.
inline PhraseOverrides read_phrase_overrides(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  PhraseOverrides ov;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cols = text::split(t, '\t');
    if (cols[0] == "add" && cols.size() == 3) {
      const auto cat = parse_relation(text::trim(cols[1]));
      if (!cat) throw DataError("unknown category '" + cols[1] + "'", lineno);
      if (*cat == Relation::Neutral) throw ConfigError("linking phrase cannot be neutral");
      ov.add.emplace_back(*cat, std::string(text::trim(cols[2])));
    } else if (cols[0] == "remove" && cols.size() == 2) {
      ov.remove.emplace_back(text::trim(cols[1]));
    } else {
      throw DataError("expected 'add\\t<category>\\t<phrase>' or 'remove\\t<phrase>'", lineno);
    }
  }
  return ov;
}

}  // namespace nlif::labeler
