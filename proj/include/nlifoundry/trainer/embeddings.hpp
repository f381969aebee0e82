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
#include <cstdlib>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/hash.hpp"
#include "nlifoundry/core/text.hpp"

namespace nlif::trainer {

enum class OovPolicy { HashedNgrams, Zero };

inline OovPolicy parse_oov_policy(std::string_view s) {
  if (s == "hashed" || s == "hashed-ngrams") return OovPolicy::HashedNgrams;
  if (s == "zero") return OovPolicy::Zero;
  throw ConfigError("unknown OOV policy '" + std::string(s) + "'");
}

class EmbeddingTable {
 public:
  EmbeddingTable(std::size_t dim, OovPolicy oov = OovPolicy::HashedNgrams, std::uint64_t seed = 0)
      : dim_(dim), oov_(oov), seed_(seed) {
    if (dim == 0) throw ConfigError("embedding dimension must be > 0");
  }

  std::size_t dim() const { return dim_; }
  OovPolicy oov_policy() const { return oov_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return vectors_.size(); }
  bool contains(const std::string& token) const { return vectors_.count(token) > 0; }

  // Returns true when the token was already present (and is overwritten).
  bool set(const std::string& token, std::vector<float> v) {
    if (v.size() != dim_) throw DomainError("vector length differs from table dimension");
    const bool existed = vectors_.count(token) > 0;
    vectors_[token] = std::move(v);
    return existed;
  }

  // Adds the token's vector to `acc` (length dim). OOV tokens contribute the
  // mean of their hashed character 3-5-gram vectors, or nothing.
  void accumulate(const std::string& token, double* acc) const {
    const auto it = vectors_.find(token);
    if (it != vectors_.end()) {
      for (std::size_t k = 0; k < dim_; ++k) acc[k] += it->second[k];
      return;
    }
    if (oov_ == OovPolicy::Zero) return;
    const auto& v = hashed(token);
    for (std::size_t k = 0; k < dim_; ++k) acc[k] += v[k];
  }

 private:
  const std::vector<float>& hashed(const std::string& token) const {
    const auto it = cache_.find(token);
    if (it != cache_.end()) return it->second;
    const std::u32string cps = U"<" + text::decode(token) + U">";
    std::vector<double> sum(dim_, 0.0);
    std::size_t grams = 0;
    for (std::size_t n = 3; n <= 5; ++n) {
      if (cps.size() < n) break;
      for (std::size_t i = 0; i + n <= cps.size(); ++i) {
        const std::string g = text::encode(std::u32string_view(cps).substr(i, n));
        std::uint64_t state = splitmix64(fnv1a64(g) ^ splitmix64(seed_));
        for (std::size_t k = 0; k < dim_; ++k) {
          state = splitmix64(state);
          sum[k] += static_cast<double>(state >> 11) * 0x1.0p-52 - 1.0;  // [-1, 1)
        }
        ++grams;
      }
    }
    std::vector<float> v(dim_);
    for (std::size_t k = 0; k < dim_; ++k)
      v[k] = static_cast<float>(grams ? sum[k] / static_cast<double>(grams) : 0.0);
    return cache_.emplace(token, std::move(v)).first->second;
  }

  std::size_t dim_;
  OovPolicy oov_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::vector<float>> vectors_;
  mutable std::unordered_map<std::string, std::vector<float>> cache_;
};

struct LoadReport {
  std::size_t duplicates = 0;
};

// Word-vector text format: "<count> <dim>" header, then "token v1 ... vdim".
// Duplicate tokens keep the last vector.
inline EmbeddingTable load_embeddings(const std::string& path,
                                      OovPolicy oov = OovPolicy::HashedNgrams,
                                      std::uint64_t seed = 0, LoadReport* report = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty embeddings file", 1);
  std::size_t count = 0, dim = 0;
  {
    char* end = nullptr;
    const char* p = line.c_str();
    count = std::strtoull(p, &end, 10);
    if (end == p) throw DataError("bad header, expected '<count> <dim>'", 1);
    p = end;
    dim = std::strtoull(p, &end, 10);
    if (end == p || dim == 0) throw DataError("bad header, expected '<count> <dim>'", 1);
    if (!text::trim(end).empty()) throw DataError("bad header, expected '<count> <dim>'", 1);
  }
  (void)count;  // informational only
  EmbeddingTable table(dim, oov, seed);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0) throw DataError("expected token and values", lineno);
    const std::string token = line.substr(0, sp);
    std::vector<float> v;
    v.reserve(dim);
    const char* p = line.c_str() + sp;
    while (true) {
      while (*p == ' ' || *p == '\t') ++p;
      if (*p == '\0') break;
      char* end = nullptr;
      const float x = std::strtof(p, &end);
      if (end == p) throw DataError("bad number in vector", lineno);
      v.push_back(x);
      p = end;
    }
    if (v.size() != dim)
      throw DataError("expected " + std::to_string(dim) + " values, got " + std::to_string(v.size()),
                      lineno);
    if (table.set(token, std::move(v)) && report) ++report->duplicates;
  }
  return table;
}

}  // namespace nlif::trainer
