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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlifoundry/cartography/cartography.hpp"
#include "nlifoundry/core/error.hpp"
#include "nlifoundry/curriculum/schedule.hpp"
#include "nlifoundry/eval/metrics.hpp"
#include "nlifoundry/trainer/features.hpp"
#include "nlifoundry/trainer/model.hpp"

namespace nlif::trainer {

struct TrainConfig {
  ModelKind kind = ModelKind::Softmax;
  double learning_rate = 0.1;
  std::optional<double> c;          // default 1 (softmax) or 0.5 (svm)
  std::optional<double> tolerance;  // default 1e-3 (softmax) or 1e-5 (svm); 0 disables
  std::size_t epochs = 10;
  std::size_t max_epochs = 2500;
  std::size_t patience = 3;  // validation epochs without macro-F1 gain; 0 disables
  std::uint64_t seed = 0;
  std::vector<Relation> classes{kAllRelations.begin(), kAllRelations.end()};

  double c_value() const { return c ? *c : (kind == ModelKind::Softmax ? 1.0 : 0.5); }
  double tol_value() const { return tolerance ? *tolerance : (kind == ModelKind::Softmax ? 1e-3 : 1e-5); }

  void validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
      throw ConfigError("learning_rate must be positive");
    if (!(c_value() > 0.0)) throw ConfigError("C must be positive");
    if (!(tol_value() >= 0.0)) throw ConfigError("tolerance must be >= 0");
    if (epochs < 1 || max_epochs < 1) throw ConfigError("epochs must be >= 1");
  }

  json to_json() const {
    json cls = json::array();
    for (Relation r : classes) cls.push_back(std::string(nlif::to_string(r)));
    return json{{"model", std::string(trainer::to_string(kind))},
                {"learning_rate", learning_rate},
                {"C", c_value()},
                {"tolerance", tol_value()},
                {"epochs", epochs},
                {"max_epochs", max_epochs},
                {"patience", patience},
                {"seed", seed},
                {"classes", cls}};
  }
};

// Mean per-example loss over `rows` plus reg/2 * |W|^2 (bias not
// regularized). Gradients are written when gw/gb are given.
inline double objective(const ClassifierModel& m, const Dataset& data,
                        const std::vector<std::size_t>& rows, double reg,
                        std::vector<double>* gw = nullptr, std::vector<double>* gb = nullptr) {
  const std::size_t K = m.num_classes(), F = m.features;
  std::array<int, kNumRelations> pos;
  pos.fill(-1);
  for (std::size_t k = 0; k < K; ++k) pos[index_of(m.classes[k])] = static_cast<int>(k);
  if (gw) gw->assign(K * F, 0.0);
  if (gb) gb->assign(K, 0.0);
  std::vector<double> z(K), coef(K);
  double loss = 0.0;
  const double inv = rows.empty() ? 0.0 : 1.0 / static_cast<double>(rows.size());
  for (std::size_t r : rows) {
    const auto& x = data.x[r];
    const int yi = pos[index_of(data.y[r])];
    if (yi < 0) throw DomainError("label outside the model's classes for " + data.ids[r]);
    m.logits(x.data(), z.data());
    if (m.kind == ModelKind::Softmax) {
      const double mx = *std::max_element(z.begin(), z.end());
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) s += std::exp(z[k] - mx);
      const double lse = mx + std::log(s);
      loss += lse - z[yi];
      for (std::size_t k = 0; k < K; ++k)
        coef[k] = std::exp(z[k] - lse) - (static_cast<int>(k) == yi ? 1.0 : 0.0);
    } else {
      for (std::size_t k = 0; k < K; ++k) {
        const double y = static_cast<int>(k) == yi ? 1.0 : -1.0;
        const double margin = 1.0 - y * z[k];
        if (margin > 0.0) {
          loss += margin;
          coef[k] = -y;
        } else {
          coef[k] = 0.0;
        }
      }
    }
    if (gw) {
      for (std::size_t k = 0; k < K; ++k) {
        if (coef[k] == 0.0) continue;
        double* g = gw->data() + k * F;
        const double c = coef[k] * inv;
        for (std::size_t j = 0; j < F; ++j) g[j] += c * x[j];
        (*gb)[k] += c;
      }
    }
  }
  loss *= inv;
  loss += 0.5 * reg * m.weight_norm2();
  if (gw)
    for (std::size_t i = 0; i < gw->size(); ++i) (*gw)[i] += reg * m.w[i];
  return loss;
}

struct EpochStats {
  std::size_t epoch = 0;
  std::size_t batches = 0;
  double mean_batch_loss = 0.0;
  double train_objective = 0.0;
  std::optional<double> val_micro_f1;
  std::optional<double> val_macro_f1;
};

inline json to_json(const EpochStats& e) {
  json j{{"epoch", e.epoch},
         {"batches", e.batches},
         {"mean_batch_loss", e.mean_batch_loss},
         {"train_objective", e.train_objective}};
  j["val_micro_f1"] = e.val_micro_f1 ? json(*e.val_micro_f1) : json(nullptr);
  j["val_macro_f1"] = e.val_macro_f1 ? json(*e.val_macro_f1) : json(nullptr);
  return j;
}

struct TrainResult {
  ClassifierModel model;
  std::vector<EpochStats> history;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  std::string stop_reason;  // "schedule", "early_stopping", "tolerance"
};

using DynamicsSink = std::function<void(const cartography::DynamicsRecord&)>;

inline eval::EvalReport evaluate(const ClassifierModel& m, const Dataset& data) {
  std::vector<Relation> pred;
  pred.reserve(data.size());
  for (const auto& x : data.x) pred.push_back(predict(m, x).label);
  return eval::classification_report(data.y, pred, m.classes);
}

// Mini-batch gradient descent over the schedule's batches in order. The
// schedule is cut into epochs of ceil(N / E) batches; after each epoch one
// dynamics record per training example is emitted.
inline TrainResult train(const Dataset& data, const curriculum::Schedule& schedule,
                         const TrainConfig& cfg, const Dataset* val = nullptr,
                         const DynamicsSink& dynamics = {}) {
  cfg.validate();
  if (schedule.batches.empty()) throw ConfigError("empty schedule");
  if (data.size() == 0) throw ConfigError("empty training set");
  std::vector<std::vector<std::size_t>> batches;
  batches.reserve(schedule.batches.size());
  for (const auto& b : schedule.batches) {
    std::vector<std::size_t> rows;
    rows.reserve(b.size());
    for (const auto& id : b) rows.push_back(data.row(id));
    batches.push_back(std::move(rows));
  }
  const std::size_t N = batches.size();
  std::size_t E = std::min({cfg.epochs, cfg.max_epochs, N});
  const std::size_t seg = (N + E - 1) / E;
  E = (N + seg - 1) / seg;

  TrainResult res;
  res.model = ClassifierModel(cfg.kind, cfg.classes, data.dim());
  res.model.hyper = cfg.to_json();
  auto& m = res.model;
  const double reg = 1.0 / (cfg.c_value() * static_cast<double>(data.size()));
  const double tol = cfg.tol_value();
  std::vector<std::size_t> all(data.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  std::vector<double> gw, gb;
  std::optional<double> prev_obj;
  double best_f1 = -1.0;
  std::size_t since_best = 0;
  ClassifierModel best = m;
  res.stop_reason = "schedule";
  std::vector<double> probs(m.num_classes());

  for (std::size_t e = 0; e < E; ++e) {
    EpochStats st;
    st.epoch = e;
    const std::size_t lo = e * seg, hi = std::min(N, lo + seg);
    double loss_sum = 0.0;
    for (std::size_t bi = lo; bi < hi; ++bi) {
      const double loss = objective(m, data, batches[bi], reg, &gw, &gb);
      if (!std::isfinite(loss))
        throw NumericError("non-finite loss " + std::to_string(loss) + " at epoch " +
                           std::to_string(e) + ", batch " + std::to_string(bi) +
                           " (learning_rate " + std::to_string(cfg.learning_rate) +
                           ", weight norm^2 " + std::to_string(m.weight_norm2()) + ")");
      loss_sum += loss;
      for (std::size_t i = 0; i < m.w.size(); ++i) m.w[i] -= cfg.learning_rate * gw[i];
      for (std::size_t k = 0; k < m.b.size(); ++k) m.b[k] -= cfg.learning_rate * gb[k];
    }
    st.batches = hi - lo;
    st.mean_batch_loss = loss_sum / static_cast<double>(hi - lo);
    st.train_objective = objective(m, data, all, reg);

    if (dynamics) {
      for (std::size_t r = 0; r < data.size(); ++r) {
        const auto p = predict(m, data.x[r]);
        double gold_prob = 0.0;
        for (std::size_t k = 0; k < m.num_classes(); ++k)
          if (m.classes[k] == data.y[r]) gold_prob = p.probabilities[k];
        dynamics({data.ids[r], static_cast<std::int64_t>(e), gold_prob, p.label});
      }
    }

    bool stop = false;
    if (val && val->size() > 0) {
      const auto rep = evaluate(m, *val);
      st.val_micro_f1 = rep.micro_f1;
      st.val_macro_f1 = rep.macro_f1;
      if (rep.macro_f1 > best_f1) {
        best_f1 = rep.macro_f1;
        best = m;
        res.best_epoch = e;
        since_best = 0;
      } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
        stop = true;
        res.stop_reason = "early_stopping";
      }
    } else {
      res.best_epoch = e;
    }
    if (!stop && tol > 0.0 && prev_obj && std::abs(*prev_obj - st.train_objective) < tol) {
      stop = true;
      res.stop_reason = "tolerance";
    }
    prev_obj = st.train_objective;
    res.history.push_back(st);
    res.epochs_run = e + 1;
    if (stop) break;
  }
  if (val && val->size() > 0) {
    best.hyper = m.hyper;
    m = best;
  }
  return res;
}

}  // namespace nlif::trainer
