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


#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <thread>

#include <httplib.h>

#include "nlifoundry/annotate/server.hpp"
#include "support/synth.hpp"

namespace nlif::annotate {
namespace {

using R = Relation;

std::vector<labeler::LabeledPair> pairs(std::size_t n) {
  std::vector<labeler::LabeledPair> v;
  for (std::size_t i = 0; i < n; ++i) {
    labeler::LabeledPair p;
    p.pair_id = "p" + std::to_string(i);
    p.premise = "Premisa " + std::to_string(i) + ".";
    p.hypothesis = "Ipoteza " + std::to_string(i) + ".";
    p.label = kAllRelations[i % 4];
    v.push_back(p);
  }
  return v;
}

// Recursively true if any object in j has the key.
bool has_key(const json& j, const std::string& key) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      if (k == key || has_key(v, key)) return true;
  } else if (j.is_array()) {
    for (const auto& v : j)
      if (has_key(v, key)) return true;
  }
  return false;
}

// ---- aggregation ----

TEST(Aggregate, StrictMajority) {
  EXPECT_EQ(aggregate({R::Reasoning, R::Reasoning, R::Neutral}), R::Reasoning);
  EXPECT_EQ(aggregate({R::Reasoning, R::Reasoning, R::Reasoning}), R::Reasoning);
  EXPECT_FALSE(aggregate({R::Reasoning, R::Neutral, R::Contrastive}));
  EXPECT_FALSE(aggregate({R::Reasoning, R::Reasoning, R::Neutral, R::Neutral}));
  EXPECT_EQ(aggregate({R::Entailment}), R::Entailment);
  EXPECT_FALSE(aggregate({}));
}

TEST(Aggregate, OrderDoesNotMatter) {
  Rng rng(11);
  for (int it = 0; it < 500; ++it) {
    std::vector<R> v;
    const std::size_t n = 1 + synth::pick(rng, 6);
    for (std::size_t i = 0; i < n; ++i) v.push_back(kAllRelations[synth::pick(rng, 4)]);
    const auto a = aggregate(v);
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_EQ(aggregate(v), a);
  }
}

// ---- kappa ----

TEST(Fleiss, TwoItemExample) { EXPECT_NEAR(fleiss_kappa({{3, 0}, {2, 1}}), -0.2, 1e-12); }

TEST(Fleiss, PerfectAgreementIsOne) {
  EXPECT_DOUBLE_EQ(fleiss_kappa({{3, 0, 0}, {0, 3, 0}, {0, 0, 3}}), 1.0);
}

TEST(Fleiss, DegenerateSingleCategory) {
  EXPECT_DOUBLE_EQ(fleiss_kappa({{3, 0}, {3, 0}}), 1.0);
}

TEST(Fleiss, Errors) {
  EXPECT_THROW(fleiss_kappa({}), DomainError);
  EXPECT_THROW(fleiss_kappa({{3, 0}, {1, 1}}), DomainError);
  EXPECT_THROW(fleiss_kappa({{3, 0}, {3}}), DomainError);
  EXPECT_THROW(fleiss_kappa({{1, 0}}), DomainError);
}

TEST(Fleiss, BoundedAboveByOne) {
  Rng rng(5);
  for (int it = 0; it < 300; ++it) {
    const std::size_t items = 1 + synth::pick(rng, 20), raters = 2 + synth::pick(rng, 4);
    std::vector<std::vector<std::size_t>> m(items, std::vector<std::size_t>(4, 0));
    for (auto& row : m)
      for (std::size_t r = 0; r < raters; ++r) ++row[synth::pick(rng, 4)];
    const double k = fleiss_kappa(m);
    EXPECT_LE(k, 1.0 + 1e-12);
    EXPECT_TRUE(std::isfinite(k));
  }
}

TEST(Cohen, Examples) {
  const std::vector<R> a{R::Contrastive, R::Contrastive, R::Reasoning, R::Reasoning};
  const std::vector<R> b{R::Contrastive, R::Reasoning, R::Contrastive, R::Reasoning};
  EXPECT_NEAR(cohen_kappa(a, b), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(cohen_kappa(a, a), 1.0);
  EXPECT_THROW(cohen_kappa(a, {R::Neutral}), DomainError);
  EXPECT_THROW(cohen_kappa({}, {}), DomainError);
}

TEST(Cohen, RelabelingInvariant) {
  Rng rng(8);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 2 + synth::pick(rng, 30);
    std::vector<R> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(kAllRelations[synth::pick(rng, 4)]);
      b.push_back(synth::pick(rng, 3) ? a.back() : kAllRelations[synth::pick(rng, 4)]);
    }
    std::array<std::size_t, 4> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    auto remap = [&](std::vector<R> v) {
      for (auto& r : v) r = kAllRelations[perm[index_of(r)]];
      return v;
    };
    EXPECT_NEAR(cohen_kappa(a, b), cohen_kappa(remap(a), remap(b)), 1e-12);
    EXPECT_NEAR(cohen_kappa(a, b), cohen_kappa(b, a), 1e-12);
  }
}

// ---- campaign ----

TEST(Campaign, CreateValidates) {
  EXPECT_THROW(Campaign::create(pairs(2), {}, 1), ConfigError);
  EXPECT_THROW(Campaign::create(pairs(2), {"a", "b"}, 3), ConfigError);
  EXPECT_THROW(Campaign::create(pairs(2), {"a", "a", "b"}, 2), ConfigError);
  auto dup = pairs(2);
  dup[1].pair_id = dup[0].pair_id;
  EXPECT_THROW(Campaign::create(dup, {"a", "b", "c"}, 3), ConflictError);
}

TEST(Campaign, VotingLifecycle) {
  auto c = Campaign::create(pairs(3), {"a", "b", "c"}, 3);
  ASSERT_EQ(c->size(), 3u);
  EXPECT_EQ(c->tasks()[0].task_id, "task-000001");
  const auto t = c->next_task("a");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->task_id, "task-000001");
  c->submit_label("task-000001", "a", R::Reasoning);
  EXPECT_EQ(c->next_task("a")->task_id, "task-000002");
  EXPECT_THROW(c->submit_label("task-000001", "a", R::Neutral), ConflictError);
  EXPECT_THROW(c->submit_label("task-000009", "a", R::Neutral), NotFoundError);
  EXPECT_THROW(c->submit_label("task-000001", "zed", R::Neutral), NotFoundError);
  c->submit_label("task-000001", "b", R::Reasoning);
  const auto done = c->submit_label("task-000001", "c", R::Neutral);
  EXPECT_EQ(done.status, TaskStatus::Complete);
  EXPECT_EQ(done.final_label, R::Reasoning);
  for (const char* a : {"a", "b", "c"}) c->submit_label("task-000002", a, kAllRelations[a[0] - 'a']);
  EXPECT_EQ(c->task("task-000002").status, TaskStatus::Discarded);
  EXPECT_THROW(c->submit_label("task-000002", "a", R::Neutral), ConflictError);
  const auto p = c->progress();
  EXPECT_EQ(p.open, 1u);
  EXPECT_EQ(p.complete, 1u);
  EXPECT_EQ(p.discarded, 1u);
  const auto finals = c->final_labels();
  ASSERT_EQ(finals.size(), 1u);
  EXPECT_EQ(finals[0].first, "p0");
}

TEST(Campaign, AssignmentRotatesOverPool) {
  auto c = Campaign::create(pairs(5), {"a", "b", "c", "d"}, 2);
  const auto ts = c->tasks();
  EXPECT_EQ(ts[0].assigned, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ts[3].assigned, (std::vector<std::string>{"d", "a"}));
  EXPECT_THROW(c->submit_label(ts[0].task_id, "c", R::Neutral), NotFoundError);
}

TEST(Campaign, AgreementOverCompleteItems) {
  auto c = Campaign::create(pairs(3), {"a", "b", "c"}, 3);
  // p0 auto=Contrastive, p1 auto=Entailment.
  for (const char* a : {"a", "b", "c"}) c->submit_label("task-000001", a, R::Contrastive);
  c->submit_label("task-000002", "a", R::Entailment);
  c->submit_label("task-000002", "b", R::Entailment);
  c->submit_label("task-000002", "c", R::Neutral);
  c->submit_label("task-000003", "a", R::Neutral);
  const auto r = c->agreement();
  EXPECT_EQ(r.complete_count, 2u);
  ASSERT_TRUE(r.fleiss_kappa);
  // Same matrix as a direct call over the two complete items.
  EXPECT_NEAR(*r.fleiss_kappa, fleiss_kappa({{3, 0, 0, 0}, {0, 2, 0, 1}}), 1e-12);
  ASSERT_TRUE(r.cohen_kappa_auto_vs_manual);
  EXPECT_DOUBLE_EQ(*r.cohen_kappa_auto_vs_manual, 1.0);
  EXPECT_EQ(r.confusion[index_of(R::Entailment)][index_of(R::Entailment)], 1u);
  const std::set<std::string> only{"p1"};
  EXPECT_EQ(c->agreement(&only).complete_count, 1u);
}

TEST(Campaign, ReplayFromLog) {
  synth::TempDir dir;
  const auto log = dir.file("c.jsonl");
  {
    auto c = Campaign::create(pairs(4), {"a", "b", "c"}, 3, log);
    for (const char* a : {"a", "b", "c"}) c->submit_label("task-000001", a, R::Entailment);
    c->submit_label("task-000002", "b", R::Neutral);
  }
  auto c = Campaign::open(log);
  EXPECT_EQ(c->size(), 4u);
  EXPECT_EQ(c->task("task-000001").final_label, R::Entailment);
  EXPECT_EQ(c->task("task-000002").labels.size(), 1u);
  EXPECT_THROW(c->submit_label("task-000002", "b", R::Neutral), ConflictError);
  c->submit_label("task-000002", "c", R::Neutral);
  auto again = Campaign::open(log);
  EXPECT_EQ(again->task("task-000002").labels.size(), 2u);
  // Auto labels come back from the sidecar for agreement only.
  ASSERT_TRUE(again->agreement().cohen_kappa_auto_vs_manual);
}

TEST(Campaign, TornLastLineIsDropped) {
  synth::TempDir dir;
  const auto log = dir.file("c.jsonl");
  {
    auto c = Campaign::create(pairs(2), {"a", "b"}, 2, log);
    c->submit_label("task-000001", "a", R::Reasoning);
  }
  {
    std::ofstream out(log, std::ios::app | std::ios::binary);
    out << R"({"event":"vote","task_id":"task-000001","annot)";
  }
  auto c = Campaign::open(log);
  EXPECT_EQ(c->task("task-000001").labels.size(), 1u);
  c->submit_label("task-000001", "b", R::Reasoning);
  auto again = Campaign::open(log);
  EXPECT_EQ(again->task("task-000001").status, TaskStatus::Complete);
}

TEST(Campaign, BadLogReportsLine) {
  synth::TempDir dir;
  const auto log = dir.file("c.jsonl");
  {
    auto c = Campaign::create(pairs(2), {"a", "b"}, 2, log);
  }
  {
    std::ofstream out(log, std::ios::app | std::ios::binary);
    out << R"({"event":"vote","task_id":"task-000001","annotator":"q","label":"neutral"})" << "\n";
  }
  try {
    Campaign::open(log);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(Campaign, LogNeverCarriesAutoLabels) {
  synth::TempDir dir;
  const auto log = dir.file("c.jsonl");
  auto c = Campaign::create(pairs(6), {"a", "b", "c"}, 3, log);
  c->submit_label("task-000001", "a", R::Neutral);
  read_jsonl_file(log, [&](const json& j, std::size_t) {
    EXPECT_FALSE(has_key(j, "auto_label"));
    EXPECT_FALSE(has_key(j, "label") && j.at("event") != "vote");
  });
  for (const auto& t : c->tasks()) {
    EXPECT_FALSE(has_key(to_json(t), "auto_label"));
    EXPECT_FALSE(has_key(task_view(t), "auto_label"));
    EXPECT_FALSE(has_key(task_view(t), "label"));
  }
}

TEST(Campaign, ConcurrentVotesAllLand) {
  std::vector<std::string> annot;
  for (int i = 0; i < 8; ++i) annot.push_back("a" + std::to_string(i));
  synth::TempDir dir;
  const auto log = dir.file("c.jsonl");
  auto c = Campaign::create(pairs(200), annot, 3, log);
  std::vector<std::thread> th;
  for (const auto& a : annot)
    th.emplace_back([&, a] {
      while (auto t = c->next_task(a)) c->submit_label(t->task_id, a, R::Neutral);
    });
  for (auto& t : th) t.join();
  EXPECT_EQ(c->progress().complete, 200u);
  auto again = Campaign::open(log);
  EXPECT_EQ(again->progress().complete, 200u);
}

// ---- HTTP ----

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    campaign_ = Campaign::create(pairs(4), {"a", "b", "c"}, 3);
    ServerOptions opt;
    opt.groups["first"] = {"p0"};
    server_ = std::make_unique<AnnotateServer>(*campaign_, opt);
    port_ = server_->bind_any();
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
  }
  httplib::Result label(const std::string& task, const std::string& body) {
    return client_->Post("/api/tasks/" + task + "/label", body, "application/json");
  }

  std::unique_ptr<Campaign> campaign_;
  std::unique_ptr<AnnotateServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(ServerTest, NextTaskAndVoting) {
  auto r = client_->Get("/api/tasks/next?annotator=a");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  const auto view = json::parse(r->body);
  EXPECT_EQ(view.at("task_id"), "task-000001");
  EXPECT_EQ(view.size(), 3u);

  r = label("task-000001", R"({"annotator":"a","label":"reasoning"})");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body).at("status"), "open");
  EXPECT_EQ(label("task-000001", R"({"annotator":"a","label":"neutral"})")->status, 409);
  EXPECT_EQ(label("task-000001", R"({"annotator":"b","label":"sideways"})")->status, 400);
  EXPECT_EQ(label("task-000001", "not json")->status, 400);
  EXPECT_EQ(label("task-000001", R"({"label":"neutral"})")->status, 400);
  EXPECT_EQ(label("task-000077", R"({"annotator":"b","label":"neutral"})")->status, 404);
  EXPECT_EQ(client_->Get("/api/tasks/next")->status, 400);
  EXPECT_EQ(client_->Get("/api/tasks/next?annotator=nobody")->status, 404);
}

TEST_F(ServerTest, NoContentWhenDone) {
  for (int i = 1; i <= 4; ++i)
    campaign_->submit_label(make_task_id(static_cast<std::size_t>(i)), "a", R::Neutral);
  const auto r = client_->Get("/api/tasks/next?annotator=a");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);
}

TEST_F(ServerTest, ProgressAgreementExport) {
  for (const char* a : {"a", "b", "c"}) {
    label("task-000001", std::string(R"({"annotator":")") + a + R"(","label":"contrastive"})");
    label("task-000002", std::string(R"({"annotator":")") + a + R"(","label":")" +
                             (a[0] == 'c' ? "neutral" : "reasoning") + "\"}");
  }
  auto r = client_->Get("/api/progress");
  ASSERT_TRUE(r);
  EXPECT_EQ(json::parse(r->body), (json{{"open", 2}, {"complete", 2}, {"discarded", 0}}));

  r = client_->Get("/api/agreement");
  const auto all = json::parse(r->body);
  EXPECT_EQ(all.at("complete_count"), 2);
  EXPECT_TRUE(all.at("fleiss_kappa").is_number());

  r = client_->Get("/api/agreement?group=first");
  const auto g = json::parse(r->body);
  EXPECT_EQ(g.at("complete_count"), 1);
  EXPECT_EQ(g.at("group"), "first");
  EXPECT_EQ(client_->Get("/api/agreement?group=none")->status, 404);

  r = client_->Get("/api/export");
  std::istringstream ss(r->body);
  std::vector<json> lines;
  read_jsonl(ss, [&](const json& j, std::size_t) { lines.push_back(j); });
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], (json{{"pair_id", "p0"}, {"final_label", "contrastive"}}));
  EXPECT_EQ(lines[1], (json{{"pair_id", "p1"}, {"final_label", "reasoning"}}));
}

TEST_F(ServerTest, Guidelines) {
  const auto r = client_->Get("/api/guidelines");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  for (const char* label : {"Contrastive", "Reasoning", "Entailment", "Neutral"})
    EXPECT_NE(r->body.find(label), std::string::npos) << label;
}

TEST_F(ServerTest, NoEndpointLeaksAutoLabels) {
  std::vector<std::string> bodies;
  for (const char* a : {"a", "b", "c"}) {
    auto r = client_->Get(std::string("/api/tasks/next?annotator=") + a);
    bodies.push_back(r->body);
    const auto id = json::parse(r->body).at("task_id").get<std::string>();
    bodies.push_back(label(id, std::string(R"({"annotator":")") + a + R"(","label":"neutral"})")->body);
  }
  for (const char* path : {"/api/progress", "/api/agreement", "/api/agreement?group=first",
                           "/api/export"})
    bodies.push_back(client_->Get(path)->body);
  for (const auto& b : bodies) {
    EXPECT_EQ(b.find("auto_label"), std::string::npos) << b;
    std::istringstream ss(b);
    std::string line;
    while (std::getline(ss, line))
      if (!line.empty()) EXPECT_FALSE(has_key(json::parse(line), "auto_label"));
  }
  // Task views must not reveal the pair's automatic label under any name.
  auto r = client_->Get("/api/tasks/next?annotator=b");
  if (r->status == 200) {
    const auto j = json::parse(r->body);
    for (const auto& [k, v] : j.items())
      EXPECT_TRUE(k == "task_id" || k == "premise" || k == "hypothesis") << k;
  }
}

}  // namespace
}  // namespace nlif::annotate
