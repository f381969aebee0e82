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

// Re-annotation campaign. State is an append-only JSONL event log:
//
//   {"event":"campaign","version":1,"annotators":[...],"required_votes":3}
//   {"event":"task","task_id":...,"pair_id":...,"premise":...,"hypothesis":...,"assigned":[...]}
//   {"event":"vote","task_id":...,"annotator":...,"label":...}
//
// Automatic labels never enter the log; they live in a sidecar file
// (<log>.auto.jsonl, records {"pair_id","auto_label"}) read only for the
// agreement report.

#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "nlifoundry/annotate/agreement.hpp"
#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/labeler/labeled_pair.hpp"

namespace nlif::annotate {

enum class TaskStatus { Open, Complete, Discarded };

inline constexpr std::string_view to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::Open: return "open";
    case TaskStatus::Complete: return "complete";
    case TaskStatus::Discarded: return "discarded";
  }
  return "open";
}

struct AnnotationTask {
  std::string task_id;
  std::string pair_id;
  std::string premise;
  std::string hypothesis;
  std::vector<std::string> assigned;
  std::map<std::string, Relation> labels;  // annotator -> vote
  TaskStatus status = TaskStatus::Open;
  std::optional<Relation> final_label;  // set iff Complete
};

// What an annotator sees.
inline json task_view(const AnnotationTask& t) {
  return json{{"task_id", t.task_id}, {"premise", t.premise}, {"hypothesis", t.hypothesis}};
}

// Full task state for storage and inspection; carries votes but never an
// automatic label.
inline json to_json(const AnnotationTask& t) {
  json labels = json::object();
  for (const auto& [a, r] : t.labels) labels[a] = std::string(to_string(r));
  json j{{"task_id", t.task_id},   {"pair_id", t.pair_id},   {"premise", t.premise},
         {"hypothesis", t.hypothesis}, {"assigned", t.assigned}, {"labels", labels},
         {"status", std::string(to_string(t.status))}};
  j["final_label"] = t.final_label ? json(std::string(to_string(*t.final_label))) : json(nullptr);
  return j;
}

struct Progress {
  std::size_t open = 0;
  std::size_t complete = 0;
  std::size_t discarded = 0;
};

inline json to_json(const Progress& p) {
  return json{{"open", p.open}, {"complete", p.complete}, {"discarded", p.discarded}};
}

inline std::string make_task_id(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "task-%06zu", k);
  return buf;
}

inline std::string auto_sidecar_path(const std::string& log_path) {
  return log_path + ".auto.jsonl";
}

// Thread-safe: mutations take the lock exclusively, so they are applied one
// at a time and in log order; reads share it.
class Campaign {
 public:
  // Deals task i to annotators i, i+1, ... (mod |annotators|).
  static std::unique_ptr<Campaign> create(const std::vector<labeler::LabeledPair>& pairs,
                                          const std::vector<std::string>& annotators,
                                          std::size_t required_votes = 3,
                                          const std::string& log_path = {}) {
    if (annotators.empty()) throw ConfigError("campaign needs at least one annotator");
    if (required_votes == 0) throw ConfigError("required_votes must be >= 1");
    if (required_votes > annotators.size())
      throw ConfigError("required_votes (" + std::to_string(required_votes) +
                        ") exceeds the number of annotators (" +
                        std::to_string(annotators.size()) + ")");
    std::set<std::string> uniq(annotators.begin(), annotators.end());
    if (uniq.size() != annotators.size()) throw ConfigError("duplicate annotator id");
    for (const auto& a : annotators)
      if (a.empty()) throw ConfigError("empty annotator id");

    auto c = std::unique_ptr<Campaign>(new Campaign());
    c->annotators_ = annotators;
    c->required_votes_ = required_votes;
    std::set<std::string> seen_pairs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!seen_pairs.insert(pairs[i].pair_id).second)
        throw ConflictError("duplicate pair_id " + pairs[i].pair_id);
      AnnotationTask t;
      t.task_id = make_task_id(i + 1);
      t.pair_id = pairs[i].pair_id;
      t.premise = pairs[i].premise;
      t.hypothesis = pairs[i].hypothesis;
      for (std::size_t k = 0; k < required_votes; ++k)
        t.assigned.push_back(annotators[(i + k) % annotators.size()]);
      c->index_[t.task_id] = c->tasks_.size();
      c->tasks_.push_back(std::move(t));
      c->auto_labels_[pairs[i].pair_id] = pairs[i].label;
    }
    if (!log_path.empty()) {
      c->log_path_ = log_path;
      {
        auto out = open_output(log_path);
        write_jsonl_line(out, c->header_json());
        for (const auto& t : c->tasks_) write_jsonl_line(out, task_event(t));
        if (!out) throw IoError("write failed: " + log_path);
      }
      auto side = open_output(auto_sidecar_path(log_path));
      for (const auto& p : pairs)
        write_jsonl_line(side, json{{"pair_id", p.pair_id},
                                    {"auto_label", std::string(to_string(p.label))}});
      c->open_log();
    }
    return c;
  }

  // Replays the log. A torn final line (no trailing newline) is dropped and
  // cut from the file before appending resumes.
  static std::unique_ptr<Campaign> open(const std::string& log_path) {
    std::ifstream in(log_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + log_path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    if (!content.empty() && content.back() != '\n') {
      const auto cut = content.rfind('\n');
      content.resize(cut == std::string::npos ? 0 : cut + 1);
      std::filesystem::resize_file(log_path, content.size());
    }
    auto c = std::unique_ptr<Campaign>(new Campaign());
    bool have_header = false;
    std::istringstream ss(content);
    read_jsonl(ss, [&](const json& j, std::size_t lineno) {
      const auto ev = j.at("event").get<std::string>();
      if (ev == "campaign") {
        if (have_header) throw DataError("second campaign header", lineno);
        have_header = true;
        c->annotators_ = j.at("annotators").get<std::vector<std::string>>();
        c->required_votes_ = j.at("required_votes").get<std::size_t>();
      } else if (!have_header) {
        throw DataError("event before campaign header", lineno);
      } else if (ev == "task") {
        AnnotationTask t;
        t.task_id = j.at("task_id").get<std::string>();
        t.pair_id = j.at("pair_id").get<std::string>();
        t.premise = j.at("premise").get<std::string>();
        t.hypothesis = j.at("hypothesis").get<std::string>();
        t.assigned = j.at("assigned").get<std::vector<std::string>>();
        if (c->index_.count(t.task_id)) throw DataError("duplicate task " + t.task_id, lineno);
        c->index_[t.task_id] = c->tasks_.size();
        c->tasks_.push_back(std::move(t));
      } else if (ev == "vote") {
        try {
          c->apply_vote(j.at("task_id").get<std::string>(), j.at("annotator").get<std::string>(),
                        relation_from_string(j.at("label").get<std::string>()));
        } catch (const DataError&) {
          throw;
        } catch (const Error& e) {
          throw DataError(std::string("invalid vote: ") + e.what(), lineno);
        }
      } else {
        throw DataError("unknown event '" + ev + "'", lineno);
      }
    });
    if (!have_header) throw DataError("missing campaign header", 1);
    const auto side = auto_sidecar_path(log_path);
    if (std::filesystem::exists(side)) {
      read_jsonl_file(side, [&](const json& j, std::size_t) {
        c->auto_labels_[j.at("pair_id").get<std::string>()] =
            relation_from_string(j.at("auto_label").get<std::string>());
      });
    }
    c->log_path_ = log_path;
    c->open_log();
    return c;
  }

  const std::vector<std::string>& annotators() const { return annotators_; }
  std::size_t required_votes() const { return required_votes_; }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return tasks_.size();
  }

  std::vector<AnnotationTask> tasks() const {
    std::shared_lock lock(mu_);
    return tasks_;
  }

  AnnotationTask task(const std::string& task_id) const {
    std::shared_lock lock(mu_);
    return tasks_[find(task_id)];
  }

  // First open task assigned to the annotator that still lacks their vote.
  std::optional<AnnotationTask> next_task(const std::string& annotator) const {
    std::shared_lock lock(mu_);
    require_annotator(annotator);
    for (const auto& t : tasks_) {
      if (t.status != TaskStatus::Open || t.labels.count(annotator)) continue;
      if (std::find(t.assigned.begin(), t.assigned.end(), annotator) != t.assigned.end()) return t;
    }
    return std::nullopt;
  }

  AnnotationTask submit_label(const std::string& task_id, const std::string& annotator,
                              Relation label) {
    std::unique_lock lock(mu_);
    const auto& t = apply_vote(task_id, annotator, label);
    if (log_) {
      write_jsonl_line(*log_, json{{"event", "vote"},
                                   {"task_id", task_id},
                                   {"annotator", annotator},
                                   {"label", std::string(to_string(label))}});
      log_->flush();
      if (!*log_) throw IoError("append failed: " + log_path_);
    }
    return t;
  }

  Progress progress() const {
    std::shared_lock lock(mu_);
    Progress p;
    for (const auto& t : tasks_) {
      if (t.status == TaskStatus::Open) ++p.open;
      if (t.status == TaskStatus::Complete) ++p.complete;
      if (t.status == TaskStatus::Discarded) ++p.discarded;
    }
    return p;
  }

  // Over complete items; `only` restricts to a set of pair ids.
  AgreementReport agreement(const std::set<std::string>* only = nullptr) const {
    std::shared_lock lock(mu_);
    AgreementReport r;
    std::vector<std::vector<std::size_t>> matrix;
    std::vector<Relation> autos, finals;
    for (const auto& t : tasks_) {
      if (only && !only->count(t.pair_id)) continue;
      if (t.status == TaskStatus::Discarded) ++r.discarded_count;
      if (t.status != TaskStatus::Complete) continue;
      ++r.complete_count;
      std::vector<std::size_t> row(kNumRelations, 0);
      for (const auto& [a, v] : t.labels) ++row[index_of(v)];
      matrix.push_back(std::move(row));
      const auto it = auto_labels_.find(t.pair_id);
      if (it != auto_labels_.end()) {
        autos.push_back(it->second);
        finals.push_back(*t.final_label);
        ++r.confusion[index_of(it->second)][index_of(*t.final_label)];
      }
    }
    if (!matrix.empty() && required_votes_ >= 2) r.fleiss_kappa = fleiss_kappa(matrix);
    if (!autos.empty()) r.cohen_kappa_auto_vs_manual = cohen_kappa(autos, finals);
    return r;
  }

  std::vector<std::pair<std::string, Relation>> final_labels() const {
    std::shared_lock lock(mu_);
    std::vector<std::pair<std::string, Relation>> out;
    for (const auto& t : tasks_)
      if (t.status == TaskStatus::Complete) out.emplace_back(t.pair_id, *t.final_label);
    return out;
  }

 private:
  Campaign() = default;

  json header_json() const {
    return json{{"event", "campaign"},
                {"version", 1},
                {"annotators", annotators_},
                {"required_votes", required_votes_}};
  }

  static json task_event(const AnnotationTask& t) {
    return json{{"event", "task"},         {"task_id", t.task_id},
                {"pair_id", t.pair_id},     {"premise", t.premise},
                {"hypothesis", t.hypothesis}, {"assigned", t.assigned}};
  }

  void open_log() {
    log_ = std::make_unique<std::ofstream>(log_path_, std::ios::binary | std::ios::app);
    if (!*log_) throw IoError("cannot append to " + log_path_);
  }

  std::size_t find(const std::string& task_id) const {
    const auto it = index_.find(task_id);
    if (it == index_.end()) throw NotFoundError("unknown task " + task_id);
    return it->second;
  }

  void require_annotator(const std::string& annotator) const {
    if (std::find(annotators_.begin(), annotators_.end(), annotator) == annotators_.end())
      throw NotFoundError("unknown annotator " + annotator);
  }

  const AnnotationTask& apply_vote(const std::string& task_id, const std::string& annotator,
                                   Relation label) {
    auto& t = tasks_[find(task_id)];
    require_annotator(annotator);
    if (std::find(t.assigned.begin(), t.assigned.end(), annotator) == t.assigned.end())
      throw NotFoundError("annotator " + annotator + " is not assigned to " + task_id);
    if (t.labels.count(annotator))
      throw ConflictError("annotator " + annotator + " already voted on " + task_id);
    if (t.status != TaskStatus::Open) throw ConflictError("task " + task_id + " is closed");
    t.labels[annotator] = label;
    if (t.labels.size() >= required_votes_) {
      std::vector<Relation> votes;
      for (const auto& [a, v] : t.labels) votes.push_back(v);
      t.final_label = aggregate(votes);
      t.status = t.final_label ? TaskStatus::Complete : TaskStatus::Discarded;
    }
    return t;
  }

  mutable std::shared_mutex mu_;
  std::vector<std::string> annotators_;
  std::size_t required_votes_ = 3;
  std::vector<AnnotationTask> tasks_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, Relation> auto_labels_;  // pair_id -> label; never served
  std::string log_path_;
  std::unique_ptr<std::ofstream> log_;
};

}  // namespace nlif::annotate
