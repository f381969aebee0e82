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
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/hash.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/relation.hpp"

namespace nlif::trainer {

enum class ModelKind : std::uint32_t { Softmax = 1, SvmOvr = 2 };

inline ModelKind parse_model_kind(std::string_view s) {
  if (s == "softmax") return ModelKind::Softmax;
  if (s == "svm" || s == "linear-svm-ovr") return ModelKind::SvmOvr;
  throw ConfigError("unknown model '" + std::string(s) + "'");
}

inline std::string_view to_string(ModelKind k) {
  return k == ModelKind::Softmax ? "softmax" : "linear-svm-ovr";
}

// Linear scorer: logits = W x + b. For the SVM the logits are the one-vs-rest
// margins and probabilities are a softmax over them.
struct ClassifierModel {
  ModelKind kind = ModelKind::Softmax;
  std::vector<Relation> classes{kAllRelations.begin(), kAllRelations.end()};
  std::size_t features = 0;
  std::vector<double> w;  // K x F, row-major
  std::vector<double> b;  // K
  json hyper = json::object();

  ClassifierModel() = default;
  ClassifierModel(ModelKind k, std::vector<Relation> cls, std::size_t f)
      : kind(k), classes(std::move(cls)), features(f), w(classes.size() * f, 0.0),
        b(classes.size(), 0.0) {
    if (classes.size() < 2) throw ConfigError("a classifier needs at least two classes");
  }

  std::size_t num_classes() const { return classes.size(); }

  void logits(const double* x, double* out) const {
    const std::size_t K = classes.size();
    for (std::size_t k = 0; k < K; ++k) {
      const double* row = w.data() + k * features;
      double s = b[k];
      for (std::size_t j = 0; j < features; ++j) s += row[j] * x[j];
      out[k] = s;
    }
  }

  std::vector<double> probabilities(const std::vector<double>& x) const {
    check(x);
    std::vector<double> p(classes.size());
    logits(x.data(), p.data());
    softmax_inplace(p);
    return p;
  }

  static void softmax_inplace(std::vector<double>& z) {
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double& v : z) {
      v = std::exp(v - m);
      s += v;
    }
    for (double& v : z) v /= s;
  }

  void check(const std::vector<double>& x) const {
    if (x.size() != features)
      throw DomainError("feature length " + std::to_string(x.size()) + " != model input " +
                        std::to_string(features));
  }

  std::string digest() const {
    std::uint64_t h = kFnvOffset;
    auto mix = [&](const std::vector<double>& v) {
      h = fnv1a64(std::string_view(reinterpret_cast<const char*>(v.data()),
                                   v.size() * sizeof(double)),
                  h);
    };
    mix(w);
    mix(b);
    return "fnv1a64:" + hex64(h);
  }

  double weight_norm2() const {
    double s = 0.0;
    for (double v : w) s += v * v;
    return s;
  }
};

struct Prediction {
  Relation label = Relation::Contrastive;
  std::vector<double> probabilities;
};

// Argmax with ties going to the earlier class.
inline Prediction predict(const ClassifierModel& m, const std::vector<double>& x) {
  Prediction p;
  p.probabilities = m.probabilities(x);
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.probabilities.size(); ++k)
    if (p.probabilities[k] > p.probabilities[best]) best = k;
  p.label = m.classes[best];
  return p;
}

// ---- persistence ----
//
// Binary layout (little-endian host order):
//   char[8] "NLIFMDL1" | u32 version | u32 kind | u32 K | u64 F |
//   u8 class[K] | f64 W[K*F] | f64 b[K] | u64 hyper_json_len | hyper_json

inline constexpr char kModelMagic[8] = {'N', 'L', 'I', 'F', 'M', 'D', 'L', '1'};
inline constexpr std::uint32_t kModelVersion = 1;

inline void save_model(const ClassifierModel& m, const std::string& path) {
  auto out = open_output(path);
  auto put = [&](const void* p, std::size_t n) { out.write(static_cast<const char*>(p), n); };
  put(kModelMagic, 8);
  const std::uint32_t version = kModelVersion, kind = static_cast<std::uint32_t>(m.kind),
                      K = static_cast<std::uint32_t>(m.classes.size());
  const std::uint64_t F = m.features;
  put(&version, 4);
  put(&kind, 4);
  put(&K, 4);
  put(&F, 8);
  for (Relation c : m.classes) {
    const auto u = static_cast<std::uint8_t>(index_of(c));
    put(&u, 1);
  }
  put(m.w.data(), m.w.size() * sizeof(double));
  put(m.b.data(), m.b.size() * sizeof(double));
  const std::string hj = m.hyper.dump();
  const std::uint64_t len = hj.size();
  put(&len, 8);
  put(hj.data(), hj.size());
  if (!out) throw IoError("write failed: " + path);
}

inline ClassifierModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::uint64_t offset = 0;
  auto get = [&](void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) throw TruncationError("model file", offset);
    offset += n;
  };
  char magic[8];
  get(magic, 8);
  if (std::memcmp(magic, kModelMagic, 8) != 0) throw ParseError("not a model file", 0);
  std::uint32_t version = 0, kind = 0, K = 0;
  std::uint64_t F = 0;
  get(&version, 4);
  if (version != kModelVersion)
    throw ParseError("unsupported model version " + std::to_string(version), 8);
  get(&kind, 4);
  if (kind != 1 && kind != 2) throw ParseError("unknown model kind", 12);
  get(&K, 4);
  get(&F, 8);
  if (K < 2 || K > kNumRelations || F > (1ULL << 32)) throw ParseError("bad model shape", 16);
  std::vector<Relation> classes;
  for (std::uint32_t k = 0; k < K; ++k) {
    std::uint8_t u = 0;
    get(&u, 1);
    if (u >= kNumRelations) throw ParseError("bad class index", offset - 1);
    classes.push_back(static_cast<Relation>(u));
  }
  ClassifierModel m(static_cast<ModelKind>(kind), classes, F);
  get(m.w.data(), m.w.size() * sizeof(double));
  get(m.b.data(), m.b.size() * sizeof(double));
  std::uint64_t len = 0;
  get(&len, 8);
  if (len > (1ULL << 24)) throw ParseError("bad hyperparameter block", offset - 8);
  std::string hj(len, '\0');
  get(hj.data(), len);
  try {
    m.hyper = json::parse(hj);
  } catch (const json::parse_error& e) {
    throw ParseError("bad hyperparameter block", offset);
  }
  return m;
}

inline json to_json(const ClassifierModel& m) {
  json cls = json::array();
  for (Relation c : m.classes) cls.push_back(std::string(to_string(c)));
  json rows = json::array();
  for (std::size_t k = 0; k < m.classes.size(); ++k)
    rows.push_back(std::vector<double>(m.w.begin() + k * m.features,
                                       m.w.begin() + (k + 1) * m.features));
  return json{{"format", "nlifoundry.model/1"},
              {"kind", std::string(to_string(m.kind))},
              {"classes", cls},
              {"features", m.features},
              {"weights", rows},
              {"bias", m.b},
              {"hyper", m.hyper},
              {"digest", m.digest()}};
}

}  // namespace nlif::trainer
