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

#include "support/synth.hpp"

namespace nlif::trainer {
namespace {

using R = Relation;

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

EmbeddingTable toy_table() {
  EmbeddingTable t(2, OovPolicy::Zero);
  t.set("a", {1.0f, 0.0f});
  t.set("b", {0.0f, 1.0f});
  t.set("c", {2.0f, 0.0f});
  return t;
}

labeler::LabeledPair pair(const std::string& id, const std::string& prem, const std::string& hyp,
                          R label = R::Neutral) {
  labeler::LabeledPair p;
  p.pair_id = id;
  p.premise = prem;
  p.hypothesis = hyp;
  p.label = label;
  return p;
}

Dataset random_dataset(std::size_t n, std::size_t f, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(f);
    for (auto& v : x) v = 2.0 * synth::unit(rng) - 1.0;
    d.add("r" + std::to_string(i), x, kAllRelations[synth::pick(rng, 4)]);
  }
  return d;
}

// Mostly separable: the class sets one coordinate high.
Dataset separable(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = synth::pick(rng, 4);
    std::vector<double> x(6);
    for (auto& v : x) v = 0.3 * (synth::unit(rng) - 0.5);
    x[k] += 1.0;
    d.add("t" + std::to_string(i), x, kAllRelations[k]);
  }
  return d;
}

curriculum::Schedule standard(const Dataset& d, std::size_t n, std::size_t batch, std::uint64_t seed = 1) {
  curriculum::PacingConfig c;
  c.total_iterations = n;
  c.batch_size = batch;
  c.seed = seed;
  return curriculum::schedule_standard(d.ids, c);
}

double accuracy(const ClassifierModel& m, const Dataset& d) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.size(); ++i) ok += predict(m, d.x[i]).label == d.y[i];
  return static_cast<double>(ok) / static_cast<double>(d.size());
}

// ---- embeddings ----

TEST(Embeddings, LoadsTextFormat) {
  synth::TempDir dir;
  write_file(dir.file("e.txt"), "2 3\nacasă 0.5 -1 2\nroșu 1 1 1\n");
  const auto t = load_embeddings(dir.file("e.txt"), OovPolicy::Zero);
  EXPECT_EQ(t.dim(), 3u);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_TRUE(t.contains("acasă"));
  std::vector<double> acc(3, 0.0);
  t.accumulate("acasă", acc.data());
  EXPECT_EQ(acc, (std::vector<double>{0.5, -1.0, 2.0}));
}

TEST(Embeddings, ArityErrorHasLine) {
  synth::TempDir dir;
  write_file(dir.file("e.txt"), "3 3\nunu 1 2 3\ndoi 1 2\ntrei 1 2 3\n");
  try {
    load_embeddings(dir.file("e.txt"));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  write_file(dir.file("h.txt"), "nonsense\n");
  EXPECT_THROW(load_embeddings(dir.file("h.txt")), DataError);
  EXPECT_THROW(load_embeddings(dir.file("missing.txt")), IoError);
}

TEST(Embeddings, DuplicatesKeepLast) {
  synth::TempDir dir;
  write_file(dir.file("e.txt"), "2 1\nx 1\nx 4\n");
  LoadReport rep;
  const auto t = load_embeddings(dir.file("e.txt"), OovPolicy::Zero, 0, &rep);
  EXPECT_EQ(rep.duplicates, 1u);
  double v = 0.0;
  t.accumulate("x", &v);
  EXPECT_EQ(v, 4.0);
}

TEST(Embeddings, HashedOovIsDeterministicAndSeeded) {
  EmbeddingTable a(8, OovPolicy::HashedNgrams, 1), b(8, OovPolicy::HashedNgrams, 1),
      c(8, OovPolicy::HashedNgrams, 2);
  std::vector<double> va(8), vb(8), vc(8);
  a.accumulate("necunoscut", va.data());
  b.accumulate("necunoscut", vb.data());
  c.accumulate("necunoscut", vc.data());
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
  for (double x : va) {
    EXPECT_GE(x, -1.0);
    EXPECT_LT(x, 1.0);
  }
}

// ---- features ----

TEST(Features, AveragedPremiseThenHypothesis) {
  const auto t = toy_table();
  FeatureExtractor fx(t, FeatureMode::Both);
  EXPECT_EQ(fx(pair("p", "A b.", "c, zz!")), (std::vector<double>{0.5, 0.5, 1.0, 0.0}));
  EXPECT_EQ(fx(pair("p", "A b.", "c c")), (std::vector<double>{0.5, 0.5, 2.0, 0.0}));
  FeatureExtractor ho(t, FeatureMode::HypothesisOnly);
  EXPECT_EQ(ho(pair("p", "A b.", "c c")), (std::vector<double>{2.0, 0.0}));
  EXPECT_EQ(ho.sentence_vector("???"), (std::vector<double>{0.0, 0.0}));
}

TEST(Features, HypothesisOnlyNeverReadsPremise) {
  const auto t = toy_table();
  FeatureExtractor ho(t, FeatureMode::HypothesisOnly);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto a = ho(pair("p", synth::plain_sentence(rng), "a b c"));
    const auto b = ho(pair("p", synth::plain_sentence(rng), "a b c"));
    EXPECT_EQ(a, b);
  }
  EXPECT_EQ(ho.premise_reads(), 0u);
  FeatureExtractor both(t, FeatureMode::Both);
  both(pair("p", "a", "b"));
  EXPECT_EQ(both.premise_reads(), 1u);
}

TEST(Features, Cosine) {
  EXPECT_NEAR(cosine({1, 0}, {0, 1}), 0.0, 1e-12);
  EXPECT_NEAR(cosine({1, 1}, {2, 2}), 1.0, 1e-12);
  EXPECT_EQ(cosine({0, 0}, {1, 1}), 0.0);
}

TEST(Features, DatasetRejectsDuplicatesAndRagged) {
  Dataset d;
  d.add("a", {1.0, 2.0}, R::Neutral);
  EXPECT_THROW(d.add("a", {1.0, 2.0}, R::Neutral), ConflictError);
  EXPECT_THROW(d.add("b", {1.0}, R::Neutral), DomainError);
  EXPECT_THROW(d.row("zz"), NotFoundError);
}

// ---- objective ----

void gradient_check(ModelKind kind, std::uint64_t seed) {
  const auto d = random_dataset(30, 5, seed);
  ClassifierModel m(kind, {kAllRelations.begin(), kAllRelations.end()}, 5);
  Rng rng(seed + 100);
  for (auto& v : m.w) v = synth::unit(rng) - 0.5;
  for (auto& v : m.b) v = synth::unit(rng) - 0.5;
  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), 0);
  const double reg = 0.03;
  std::vector<double> gw, gb;
  objective(m, d, rows, reg, &gw, &gb);
  const double h = 1e-6;
  for (std::size_t i = 0; i < m.w.size(); ++i) {
    auto mp = m, mm = m;
    mp.w[i] += h;
    mm.w[i] -= h;
    const double num = (objective(mp, d, rows, reg) - objective(mm, d, rows, reg)) / (2 * h);
    EXPECT_NEAR(gw[i], num, 1e-5) << "w" << i;
  }
  for (std::size_t k = 0; k < m.b.size(); ++k) {
    auto mp = m, mm = m;
    mp.b[k] += h;
    mm.b[k] -= h;
    const double num = (objective(mp, d, rows, reg) - objective(mm, d, rows, reg)) / (2 * h);
    EXPECT_NEAR(gb[k], num, 1e-5) << "b" << k;
  }
}

TEST(Objective, SoftmaxGradientMatchesFiniteDifferences) {
  for (std::uint64_t s = 1; s <= 5; ++s) gradient_check(ModelKind::Softmax, s);
}

TEST(Objective, HingeGradientMatchesFiniteDifferences) {
  for (std::uint64_t s = 1; s <= 5; ++s) gradient_check(ModelKind::SvmOvr, s);
}

TEST(Objective, ZeroModelIsUniform) {
  ClassifierModel m(ModelKind::Softmax, {kAllRelations.begin(), kAllRelations.end()}, 3);
  const auto p = predict(m, {0.3, -1.0, 2.0});
  for (double v : p.probabilities) EXPECT_DOUBLE_EQ(v, 0.25);
  EXPECT_EQ(p.label, kAllRelations[0]);
  const auto d = random_dataset(10, 3, 1);
  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), 0);
  EXPECT_NEAR(objective(m, d, rows, 1.0), std::log(4.0), 1e-12);
}

TEST(Objective, ProbabilitiesSumToOneAndArgmaxIsScaleFree) {
  Rng rng(6);
  for (int it = 0; it < 200; ++it) {
    ClassifierModel m(synth::pick(rng, 2) ? ModelKind::Softmax : ModelKind::SvmOvr,
                      {kAllRelations.begin(), kAllRelations.end()}, 4);
    for (auto& v : m.w) v = 10.0 * (synth::unit(rng) - 0.5);
    for (auto& v : m.b) v = synth::unit(rng) - 0.5;
    std::vector<double> x(4);
    for (auto& v : x) v = 4.0 * (synth::unit(rng) - 0.5);
    const auto p = predict(m, x);
    double s = 0.0;
    for (double v : p.probabilities) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    auto scaled = m;
    for (auto& v : scaled.w) v *= 3.0;
    for (auto& v : scaled.b) v *= 3.0;
    EXPECT_EQ(predict(scaled, x).label, p.label);
  }
  ClassifierModel m(ModelKind::Softmax, {kAllRelations.begin(), kAllRelations.end()}, 2);
  EXPECT_THROW(predict(m, {1.0}), DomainError);
}

// ---- training ----

TEST(Train, FitsSeparableData) {
  for (auto kind : {ModelKind::Softmax, ModelKind::SvmOvr}) {
    const auto d = separable(200, 3);
    TrainConfig cfg;
    cfg.kind = kind;
    cfg.learning_rate = 0.5;
    cfg.epochs = 20;
    cfg.tolerance = 0.0;
    const auto res = train(d, standard(d, 400, 16), cfg);
    EXPECT_GE(accuracy(res.model, d), 0.99) << to_string(kind);
    EXPECT_EQ(res.stop_reason, "schedule");
    EXPECT_EQ(res.epochs_run, 20u);
  }
}

TEST(Train, DeterministicDigest) {
  const auto d = separable(100, 4);
  TrainConfig cfg;
  cfg.epochs = 5;
  const auto s = standard(d, 50, 8);
  EXPECT_EQ(train(d, s, cfg).model.digest(), train(d, s, cfg).model.digest());
  const auto other = standard(d, 50, 8, 2);
  EXPECT_NE(train(d, s, cfg).model.digest(), train(d, other, cfg).model.digest());
}

TEST(Train, DynamicsAreRectangular) {
  const auto d = separable(60, 5);
  TrainConfig cfg;
  cfg.epochs = 7;
  cfg.tolerance = 0.0;
  std::vector<cartography::DynamicsRecord> recs;
  const auto res = train(d, standard(d, 30, 8), cfg, nullptr,
                         [&](const cartography::DynamicsRecord& r) { recs.push_back(r); });
  EXPECT_EQ(res.epochs_run, 6u);  // 30 batches cut into segments of 5
  ASSERT_EQ(recs.size(), d.size() * res.epochs_run);
  std::map<std::string, std::set<std::int64_t>> seen;
  for (const auto& r : recs) {
    EXPECT_TRUE(seen[r.example_id].insert(r.epoch).second);
    EXPECT_GE(r.gold_prob, 0.0);
    EXPECT_LE(r.gold_prob, 1.0);
  }
  EXPECT_EQ(seen.size(), d.size());
  std::unordered_map<std::string, R> gold;
  for (std::size_t i = 0; i < d.size(); ++i) gold[d.ids[i]] = d.y[i];
  EXPECT_EQ(cartography::compute_points(recs, gold).size(), d.size());
}

TEST(Train, StrongRegularizationShrinksWeights) {
  const auto d = separable(200, 6);
  const auto s = standard(d, 200, 16);
  TrainConfig cfg;
  cfg.learning_rate = 1e-4;
  cfg.tolerance = 0.0;
  cfg.c = 1.0;
  const double loose = train(d, s, cfg).model.weight_norm2();
  cfg.c = 1e-6;
  const double tight = train(d, s, cfg).model.weight_norm2();
  EXPECT_LT(tight, 1e-3 * loose);
}

TEST(Train, ToleranceStops) {
  const auto d = separable(100, 7);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.tolerance = 1e9;
  const auto res = train(d, standard(d, 100, 8), cfg);
  EXPECT_EQ(res.stop_reason, "tolerance");
  EXPECT_EQ(res.epochs_run, 2u);
}

TEST(Train, EarlyStoppingKeepsBestEpoch) {
  const auto d = separable(200, 8);
  const auto val = random_dataset(60, 6, 9);  // labels unrelated to features
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.patience = 2;
  cfg.tolerance = 0.0;
  const auto res = train(d, standard(d, 300, 8), cfg, &val);
  double best = -1.0;
  for (const auto& h : res.history) best = std::max(best, *h.val_macro_f1);
  EXPECT_EQ(*res.history[res.best_epoch].val_macro_f1, best);
  EXPECT_NEAR(evaluate(res.model, val).macro_f1, best, 1e-12);
  if (res.stop_reason == "early_stopping") EXPECT_EQ(res.epochs_run, res.best_epoch + 1 + cfg.patience);
}

TEST(Train, DivergenceRaises) {
  Dataset d;
  d.add("a", {1e150, -1e150}, R::Neutral);
  d.add("b", {-1e150, 1e150}, R::Reasoning);
  TrainConfig cfg;
  cfg.learning_rate = 1e150;
  EXPECT_THROW(train(d, standard(d, 10, 2), cfg), NumericError);
}

TEST(Train, ConfigErrors) {
  const auto d = separable(10, 1);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(train(d, standard(d, 2, 2), cfg), ConfigError);
  cfg.learning_rate = 0.1;
  cfg.c = -1.0;
  EXPECT_THROW(train(d, standard(d, 2, 2), cfg), ConfigError);
  EXPECT_THROW(train(d, {}, TrainConfig{}), ConfigError);
  EXPECT_THROW(parse_model_kind("forest"), ConfigError);
  EXPECT_THROW(parse_feature_mode("premise-only"), ConfigError);
}

// ---- persistence ----

TEST(ModelFile, RoundTrip) {
  synth::TempDir dir;
  const auto d = separable(80, 2);
  TrainConfig cfg;
  cfg.kind = ModelKind::SvmOvr;
  cfg.epochs = 3;
  auto m = train(d, standard(d, 30, 8), cfg).model;
  m.hyper["features"] = {{"mode", "both"}, {"dim", 3}};
  save_model(m, dir.file("m.bin"));
  const auto back = load_model(dir.file("m.bin"));
  EXPECT_EQ(back.digest(), m.digest());
  EXPECT_EQ(back.kind, m.kind);
  EXPECT_EQ(back.classes, m.classes);
  EXPECT_EQ(back.hyper, m.hyper);
  EXPECT_EQ(to_json(back), to_json(m));
}

TEST(ModelFile, TruncatedAndForeignFiles) {
  synth::TempDir dir;
  ClassifierModel m(ModelKind::Softmax, {R::Neutral, R::Reasoning}, 3);
  save_model(m, dir.file("m.bin"));
  std::ifstream in(dir.file("m.bin"), std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  write_file(dir.file("t.bin"), bytes.substr(0, 30));
  EXPECT_THROW(load_model(dir.file("t.bin")), TruncationError);
  write_file(dir.file("f.bin"), "GIF89a.......................");
  EXPECT_THROW(load_model(dir.file("f.bin")), ParseError);
}

}  // namespace
}  // namespace nlif::trainer
