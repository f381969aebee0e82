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

#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/text.hpp"
#include "nlifoundry/labeler/labeled_pair.hpp"
#include "nlifoundry/trainer/embeddings.hpp"

namespace nlif::trainer {

enum class FeatureMode { Both, HypothesisOnly };

inline FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "both") return FeatureMode::Both;
  if (s == "hypothesis-only") return FeatureMode::HypothesisOnly;
  throw ConfigError("unknown feature mode '" + std::string(s) + "'");
}

// Averaged word vectors; premise then hypothesis in mode Both.
class FeatureExtractor {
 public:
  FeatureExtractor(const EmbeddingTable& table, FeatureMode mode) : table_(table), mode_(mode) {}

  std::size_t length() const { return mode_ == FeatureMode::Both ? 2 * table_.dim() : table_.dim(); }
  FeatureMode mode() const { return mode_; }

  // Mean token vector; zero when there are no tokens.
  std::vector<double> sentence_vector(std::string_view sentence) const {
    std::vector<double> v(table_.dim(), 0.0);
    sentence_into(sentence, v.data());
    return v;
  }

  std::vector<double> operator()(const labeler::LabeledPair& p) const {
    std::vector<double> f(length(), 0.0);
    if (mode_ == FeatureMode::Both) {
      ++premise_reads_;
      sentence_into(p.premise, f.data());
      sentence_into(p.hypothesis, f.data() + table_.dim());
    } else {
      sentence_into(p.hypothesis, f.data());
    }
    return f;
  }

  // How many times a premise was read; stays 0 in hypothesis-only mode.
  std::size_t premise_reads() const { return premise_reads_; }

 private:
  void sentence_into(std::string_view sentence, double* out) const {
    const auto tokens = text::words(sentence);
    if (tokens.empty()) return;
    for (const auto& t : tokens) table_.accumulate(t, out);
    const double n = static_cast<double>(tokens.size());
    for (std::size_t k = 0; k < table_.dim(); ++k) out[k] /= n;
  }

  const EmbeddingTable& table_;
  FeatureMode mode_;
  mutable std::size_t premise_reads_ = 0;
};

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

// Rows of features with gold labels, addressable by example id.
struct Dataset {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> x;
  std::vector<Relation> y;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return ids.size(); }
  std::size_t dim() const { return x.empty() ? 0 : x.front().size(); }

  void add(std::string id, std::vector<double> features, Relation label) {
    if (!x.empty() && features.size() != x.front().size())
      throw DomainError("feature length mismatch for " + id);
    if (!index.emplace(id, ids.size()).second) throw ConflictError("duplicate example " + id);
    ids.push_back(std::move(id));
    x.push_back(std::move(features));
    y.push_back(label);
  }

  std::size_t row(const std::string& id) const {
    const auto it = index.find(id);
    if (it == index.end()) throw NotFoundError("unknown example " + id);
    return it->second;
  }
};

inline Dataset featurize_all(const std::vector<labeler::LabeledPair>& pairs,
                             const FeatureExtractor& fx) {
  Dataset d;
  for (const auto& p : pairs) d.add(p.pair_id, fx(p), p.label);
  return d;
}

}  // namespace nlif::trainer
