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

// Batch schedules. A schedule is N batches of example ids; batches before
// phase_boundary belong to the curriculum phase, the rest to the standard
// phase.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/hash.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/relation.hpp"

namespace nlif::curriculum {

using Batch = std::vector<std::string>;

struct Schedule {
  std::vector<Batch> batches;
  std::size_t phase_boundary = 0;
  json meta = json::object();

  std::string_view phase_of(std::size_t b) const {
    return b < phase_boundary ? "curriculum" : "standard";
  }
};

enum class Pacing { Linear, Step };

inline Pacing parse_pacing(std::string_view s) {
  if (s == "linear") return Pacing::Linear;
  if (s == "step") return Pacing::Step;
  throw ConfigError("unknown pacing '" + std::string(s) + "'");
}

struct PacingConfig {
  std::size_t total_iterations = 0;  // N
  std::size_t batch_size = 32;
  double curriculum_fraction = 0.5;
  Pacing pacing = Pacing::Linear;
  std::size_t steps = 4;  // step pacing only
  std::uint64_t seed = 0;

  void validate() const {
    if (total_iterations < 1) throw ConfigError("total_iterations must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(curriculum_fraction >= 0.0 && curriculum_fraction <= 1.0))
      throw ConfigError("curriculum_fraction must be in [0, 1]");
    if (pacing == Pacing::Step && steps < 1) throw ConfigError("steps must be >= 1");
  }

  // Batches in the curriculum phase of a two-phase schedule.
  std::size_t curriculum_batches() const {
    const double t = std::ceil(curriculum_fraction * static_cast<double>(total_iterations) - 1e-9);
    return std::min(total_iterations, static_cast<std::size_t>(std::max(0.0, t)));
  }

  json to_json() const {
    return json{{"total_iterations", total_iterations},
                {"batch_size", batch_size},
                {"curriculum_fraction", curriculum_fraction},
                {"pacing", pacing == Pacing::Linear ? "linear" : "step"},
                {"steps", steps},
                {"seed", seed}};
  }
};

// Shuffled passes over a fixed list; reshuffles when a pass is used up, so
// every element is drawn once per pass.
class Cycler {
 public:
  Cycler(std::vector<std::string> items, Rng& rng, bool shuffle_first = true)
      : items_(std::move(items)), rng_(&rng) {
    if (items_.empty()) throw ConfigError("cannot draw from an empty pool");
    if (shuffle_first) std::shuffle(items_.begin(), items_.end(), *rng_);
  }

  const std::string& next() {
    if (pos_ == items_.size()) {
      std::shuffle(items_.begin(), items_.end(), *rng_);
      pos_ = 0;
    }
    return items_[pos_++];
  }

 private:
  std::vector<std::string> items_;
  Rng* rng_;
  std::size_t pos_ = 0;
};

namespace detail {

inline Rng make_rng(std::uint64_t seed, std::uint64_t salt) {
  return Rng(splitmix64(seed ^ splitmix64(salt)));
}

inline void fill_batches(Schedule& s, std::size_t count, std::size_t batch_size, Cycler& c) {
  for (std::size_t b = 0; b < count; ++b) {
    Batch batch;
    batch.reserve(batch_size);
    for (std::size_t k = 0; k < batch_size; ++k) batch.push_back(c.next());
    s.batches.push_back(std::move(batch));
  }
}

// Distinct ids sorted by (score, id); every id must be scored.
inline std::vector<std::string> sort_by_score(const std::vector<std::string>& ids,
                                              const std::unordered_map<std::string, double>& scores) {
  std::vector<std::string> uniq(ids);
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<std::pair<double, std::string>> keyed;
  keyed.reserve(uniq.size());
  for (auto& id : uniq) {
    const auto it = scores.find(id);
    if (it == scores.end()) throw NotFoundError("no score for example " + id);
    if (std::isnan(it->second)) throw DomainError("NaN score for example " + id);
    keyed.emplace_back(it->second, std::move(id));
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> out;
  out.reserve(keyed.size());
  for (auto& [s, id] : keyed) out.push_back(std::move(id));
  return out;
}

}  // namespace detail

// N batches from shuffled passes over the pool (which may already contain
// oversampled repeats).
inline Schedule schedule_standard(const std::vector<std::string>& pool, const PacingConfig& cfg) {
  cfg.validate();
  Schedule s;
  s.meta = json{{"strategy", "standard"}, {"config", cfg.to_json()}, {"pool_size", pool.size()}};
  auto rng = detail::make_rng(cfg.seed, 0x57a4d);
  Cycler c(pool, rng);
  detail::fill_batches(s, cfg.total_iterations, cfg.batch_size, c);
  s.phase_boundary = 0;
  return s;
}

struct GroupPools {
  std::vector<std::string> e2l;
  std::vector<std::string> ambiguous;
  std::vector<std::string> h2l;
};

// floor(N/4) batches of E2L, floor(N/4) of A, the rest of H2L; the whole
// schedule is curriculum.
inline Schedule schedule_cart_cl(const GroupPools& groups, const PacingConfig& cfg) {
  cfg.validate();
  if (groups.e2l.empty()) throw ConfigError("group E2L is empty");
  if (groups.ambiguous.empty()) throw ConfigError("group A is empty");
  if (groups.h2l.empty()) throw ConfigError("group H2L is empty");
  const std::size_t N = cfg.total_iterations;
  const std::size_t q = N / 4;
  Schedule s;
  s.meta = json{{"strategy", "cart"},
                {"config", cfg.to_json()},
                {"segments", {{"E2L", q}, {"A", q}, {"H2L", N - 2 * q}}}};
  auto rng = detail::make_rng(cfg.seed, 0xca27c1);
  Cycler e(groups.e2l, rng), a(groups.ambiguous, rng), h(groups.h2l, rng);
  detail::fill_batches(s, q, cfg.batch_size, e);
  detail::fill_batches(s, q, cfg.batch_size, a);
  detail::fill_batches(s, N - 2 * q, cfg.batch_size, h);
  s.phase_boundary = N;
  return s;
}

// Number of easiest examples available to curriculum batch t (1-based) of
// t_cur, out of n.
inline std::size_t available(std::size_t t, std::size_t t_cur, std::size_t n, Pacing pacing,
                             std::size_t steps) {
  double frac = static_cast<double>(t) / static_cast<double>(t_cur);
  if (pacing == Pacing::Step) {
    const double st = static_cast<double>(steps);
    frac = std::ceil(frac * st - 1e-9) / st;
  }
  const auto k = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n) - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

// Easy-to-hard by ascending score. Curriculum batch t draws uniformly from
// the `available` easiest examples; the standard phase uses shuffled passes
// over the pool.
inline Schedule schedule_scored(const std::vector<std::string>& pool,
                                const std::unordered_map<std::string, double>& scores,
                                const PacingConfig& cfg, const std::string& strategy = "scored") {
  cfg.validate();
  if (pool.empty()) throw ConfigError("cannot draw from an empty pool");
  const auto order = detail::sort_by_score(pool, scores);
  const std::size_t n = order.size();
  const std::size_t t_cur = cfg.curriculum_batches();
  Schedule s;
  s.meta = json{{"strategy", strategy}, {"config", cfg.to_json()}, {"examples", n}};
  auto rng = detail::make_rng(cfg.seed, 0x5c03ed);
  for (std::size_t t = 1; t <= t_cur; ++t) {
    const std::size_t avail = available(t, t_cur, n, cfg.pacing, cfg.steps);
    Batch batch;
    batch.reserve(cfg.batch_size);
    for (std::size_t k = 0; k < cfg.batch_size; ++k) batch.push_back(order[uniform_index(rng, avail)]);
    s.batches.push_back(std::move(batch));
  }
  s.phase_boundary = t_cur;
  if (t_cur < cfg.total_iterations) {
    Cycler c(pool, rng);
    detail::fill_batches(s, cfg.total_iterations - t_cur, cfg.batch_size, c);
  }
  return s;
}

// Class-balanced easy-to-hard batches: each batch takes batch_size/K examples
// from every class, walking each class in ascending score and reshuffling it
// once it runs out. The standard phase draws balanced shuffled batches.
inline Schedule schedule_cart_stra_clpp(
    const std::unordered_map<std::string, double>& scores,
    const std::unordered_map<std::string, Relation>& labels, const PacingConfig& cfg,
    const std::vector<Relation>& classes = {kAllRelations.begin(), kAllRelations.end()}) {
  cfg.validate();
  const std::size_t K = classes.size();
  if (K == 0) throw ConfigError("empty class set");
  if (cfg.batch_size % K != 0) {
    const std::size_t lo = std::max<std::size_t>(K, cfg.batch_size / K * K);
    throw ConfigError("batch_size " + std::to_string(cfg.batch_size) +
                      " is not divisible by the number of classes (" + std::to_string(K) +
                      "); use " + std::to_string(lo) + " or " + std::to_string(lo + K));
  }
  const std::size_t per = cfg.batch_size / K;
  std::map<Relation, std::vector<std::string>> members;
  for (const auto& [id, label] : labels) members[label].push_back(id);
  std::vector<std::vector<std::string>> sorted;
  for (Relation c : classes) {
    const auto it = members.find(c);
    if (it == members.end() || it->second.empty())
      throw ConfigError("class " + std::string(to_string(c)) + " has no examples");
    sorted.push_back(detail::sort_by_score(it->second, scores));
  }
  const std::size_t t_cur = cfg.curriculum_batches();
  Schedule s;
  s.meta = json{{"strategy", "cartstrapp"}, {"config", cfg.to_json()}, {"per_class", per}};
  auto rng = detail::make_rng(cfg.seed, 0x57a7c1);
  std::vector<Cycler> walk;
  for (const auto& v : sorted) walk.emplace_back(v, rng, /*shuffle_first=*/false);
  for (std::size_t t = 0; t < t_cur; ++t) {
    Batch batch;
    batch.reserve(cfg.batch_size);
    for (auto& w : walk)
      for (std::size_t k = 0; k < per; ++k) batch.push_back(w.next());
    s.batches.push_back(std::move(batch));
  }
  s.phase_boundary = t_cur;
  std::vector<Cycler> uniform;
  for (const auto& v : sorted) uniform.emplace_back(v, rng);
  for (std::size_t t = t_cur; t < cfg.total_iterations; ++t) {
    Batch batch;
    batch.reserve(cfg.batch_size);
    for (auto& u : uniform)
      for (std::size_t k = 0; k < per; ++k) batch.push_back(u.next());
    s.batches.push_back(std::move(batch));
  }
  return s;
}

inline void write_schedule(const Schedule& s, std::ostream& out) {
  for (std::size_t b = 0; b < s.batches.size(); ++b)
    write_jsonl_line(out, json{{"batch", b}, {"phase", std::string(s.phase_of(b))},
                               {"ids", s.batches[b]}});
}

inline void write_schedule(const Schedule& s, const std::string& path) {
  auto out = open_output(path);
  write_schedule(s, out);
  if (!out) throw IoError("write failed: " + path);
}

inline Schedule read_schedule(const std::string& path) {
  Schedule s;
  bool in_standard = false;
  read_jsonl_file(path, [&](const json& j, std::size_t lineno) {
    if (j.at("batch").get<std::size_t>() != s.batches.size())
      throw DataError("batches out of order", lineno);
    const auto phase = j.at("phase").get<std::string>();
    if (phase == "curriculum") {
      if (in_standard) throw DataError("curriculum batch after the standard phase", lineno);
      ++s.phase_boundary;
    } else if (phase == "standard") {
      in_standard = true;
    } else {
      throw DataError("unknown phase '" + phase + "'", lineno);
    }
    s.batches.push_back(j.at("ids").get<Batch>());
  });
  return s;
}

}  // namespace nlif::curriculum
