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

// nlif: command-line front end. Every command that writes an output also
// writes <output>.manifest.json with its parameters, seeds and input digests.
// Defaults for any flag can come from a key=value file passed via --config
// (use "command.flag=value" for subcommand flags).

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "nlifoundry/annotate/server.hpp"
#include "nlifoundry/nlifoundry.hpp"

namespace {

using namespace nlif;
using nlif::json;

void note(const std::string& msg) { std::cerr << "nlif: " << msg << '\n'; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& part : text::split(s, ',')) {
    const auto t = text::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::vector<double> read_numbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<double> out;
  std::string tok;
  std::size_t k = 0;
  while (in >> tok) {
    ++k;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw DataError("not a number: '" + tok + "'", k);
    }
  }
  return out;
}

std::vector<labeler::LabeledPair> pairs_in(const corpus::Corpus& c, const std::string& split) {
  if (split.empty() || split == "all") return c.pairs;
  const auto s = corpus::parse_split(split);
  if (!s) throw ConfigError("unknown split '" + split + "'");
  std::vector<labeler::LabeledPair> out;
  for (const auto* p : c.in_split(*s)) out.push_back(*p);
  return out;
}

// Training pool: the train split when the corpus has one, else every pair.
std::vector<labeler::LabeledPair> training_pairs(const corpus::Corpus& c) {
  auto train = pairs_in(c, "train");
  return train.empty() ? c.pairs : train;
}

struct EmbeddingArgs {
  std::string path;
  std::size_t hashed_dim = 300;
  std::string oov = "hashed";
  std::uint64_t seed = 0;

  void add(CLI::App* app) {
    app->add_option("--embeddings", path, "word vectors in text format");
    app->add_option("--hashed-dim", hashed_dim, "dimension of hashed n-gram vectors");
    app->add_option("--oov", oov, "OOV policy: hashed|zero");
    app->add_option("--embedding-seed", seed, "seed of the hashed n-gram vectors");
  }

  trainer::EmbeddingTable load() const {
    const auto policy = trainer::parse_oov_policy(oov);
    if (!path.empty()) {
      trainer::LoadReport rep;
      auto t = trainer::load_embeddings(path, policy, seed, &rep);
      if (rep.duplicates) note(std::to_string(rep.duplicates) + " duplicate tokens (last kept)");
      return t;
    }
    return trainer::EmbeddingTable(hashed_dim, trainer::OovPolicy::HashedNgrams, seed);
  }

  json to_json() const {
    return json{{"embeddings", path}, {"hashed_dim", hashed_dim}, {"oov", oov}, {"embedding_seed", seed}};
  }
};

Manifest manifest_for(const std::string& command) {
  Manifest m;
  m.command = command;
  return m;
}

void write_manifest(Manifest& m, const std::string& out_path) {
  m.outputs["main"] = out_path;
  m.write(out_path + ".manifest.json");
}

// ---- commands ----

struct IngestArgs {
  std::string dump, out, format = "auto";
  std::int64_t min_len = 50;
};

void run_ingest(const IngestArgs& a) {
  std::ifstream in(a.dump, std::ios::binary);
  if (!in) throw IoError("cannot open " + a.dump);
  ingest::IngestOptions opt;
  opt.format = ingest::parse_dump_format(a.format);
  opt.min_len = a.min_len;
  auto out = open_output(a.out);
  const auto rep = ingest::ingest_stream(in, opt, [&](const ingest::Sentence& s) {
    write_jsonl_line(out, ingest::to_json(s));
  });
  note("pages read " + std::to_string(rep.pages_read) + ", kept " + std::to_string(rep.pages_kept) +
       ", sentences " + std::to_string(rep.sentences));
  auto m = manifest_for("ingest");
  m.params = {{"format", a.format}, {"min_len", a.min_len}};
  m.params["report"] = {{"pages_read", rep.pages_read},
                        {"pages_kept", rep.pages_kept},
                        {"dropped_namespace", rep.dropped_namespace},
                        {"dropped_redirect", rep.dropped_redirect},
                        {"dropped_disambiguation", rep.dropped_disambiguation},
                        {"markup_recoveries", rep.markup_recoveries},
                        {"sentences", rep.sentences}};
  m.add_input(a.dump);
  write_manifest(m, a.out);
}

struct LabelArgs {
  std::string sentences, out, phrases, neutral_mode = "contiguous";
  std::optional<double> neutral_rate;
  bool keep_cues = false;
  std::uint64_t seed = 0;
};

void run_label(const LabelArgs& a) {
  labeler::PhraseOverrides ov;
  if (!a.phrases.empty()) ov = labeler::read_phrase_overrides(a.phrases);
  const auto table = labeler::load_phrase_table(ov);
  const auto sentences = ingest::read_sentences(a.sentences);
  labeler::ExtractOptions opt;
  opt.neutral_rate = a.neutral_rate;
  opt.neutral_mode = labeler::parse_neutral_mode(a.neutral_mode);
  opt.keep_cues = a.keep_cues;
  opt.seed = a.seed;
  const auto res = labeler::extract_pairs(sentences, table, opt);
  auto out = open_output(a.out);
  for (const auto& p : res.pairs) write_jsonl_line(out, labeler::to_json(p));
  note(std::to_string(res.pairs.size()) + " pairs (" + std::to_string(res.cue_pairs) +
       " cue pairs, neutral rate " + std::to_string(res.neutral_rate) + ")");
  auto m = manifest_for("label");
  m.params = {{"neutral_mode", a.neutral_mode},
              {"neutral_rate", res.neutral_rate},
              {"keep_cues", a.keep_cues},
              {"phrases", table.size()},
              {"cue_pairs", res.cue_pairs},
              {"neutral_candidates", res.neutral_candidates},
              {"discarded_empty", res.discarded_empty},
              {"cross_article_skipped", res.cross_article_skipped}};
  m.seeds = {{"seed", a.seed}};
  m.add_input(a.sentences);
  if (!a.phrases.empty()) m.add_input(a.phrases);
  write_manifest(m, a.out);
}

struct SplitArgs {
  std::string corpus, out, ratios = "0.906,0.047,0.047";
  std::uint64_t seed = 0;
};

void run_split(const SplitArgs& a) {
  const auto c = corpus::read_corpus(a.corpus);
  corpus::SplitReport rep;
  const auto s = corpus::stratified_split(c, corpus::parse_ratios(a.ratios), a.seed, &rep);
  for (Relation r : rep.forced_to_train)
    note("warning: class " + std::string(to_string(r)) + " is too small to split; all in train");
  corpus::write_corpus(s, a.out);
  auto m = manifest_for("split");
  m.params = {{"ratios", a.ratios}};
  m.seeds = {{"seed", a.seed}};
  m.add_input(a.corpus);
  write_manifest(m, a.out);
}

struct StatsArgs {
  std::string corpus, json_out;
  bool table2 = false;
};

void run_stats(const StatsArgs& a) {
  const auto st = corpus::compute_stats(corpus::read_corpus(a.corpus));
  if (a.table2 || a.json_out.empty()) corpus::print_split_class_table(st, std::cout);
  if (!a.json_out.empty()) {
    auto out = open_output(a.json_out);
    out << corpus::to_json(st).dump(2) << '\n';
    auto m = manifest_for("stats");
    m.add_input(a.corpus);
    write_manifest(m, a.json_out);
  }
}

struct OversampleArgs {
  std::string corpus, out;
  std::uint64_t seed = 0;
};

void run_oversample(const OversampleArgs& a) {
  const auto ids = corpus::oversample(training_pairs(corpus::read_corpus(a.corpus)), a.seed);
  auto out = open_output(a.out);
  for (const auto& id : ids) out << id << '\n';
  auto m = manifest_for("oversample");
  m.seeds = {{"seed", a.seed}};
  m.params = {{"pool_size", ids.size()}};
  m.add_input(a.corpus);
  write_manifest(m, a.out);
}

struct AnnotateCreateArgs {
  std::string pairs, campaign, split = "all", annotators;
  std::size_t votes = 3;
};

void run_annotate_create(const AnnotateCreateArgs& a) {
  const auto c = corpus::read_corpus(a.pairs);
  std::vector<labeler::LabeledPair> pairs;
  for (const auto& s : split_list(a.split)) {
    auto part = pairs_in(c, s);
    pairs.insert(pairs.end(), part.begin(), part.end());
  }
  const auto camp = annotate::Campaign::create(pairs, split_list(a.annotators), a.votes, a.campaign);
  note(std::to_string(camp->size()) + " tasks");
  auto m = manifest_for("annotate create");
  m.params = {{"split", a.split}, {"annotators", a.annotators}, {"votes", a.votes}};
  m.add_input(a.pairs);
  write_manifest(m, a.campaign);
}

struct AnnotateServeArgs {
  std::string campaign, guidelines, ui, groups, host = "127.0.0.1";
  int port = 8080;
};

annotate::AnnotateServer* g_server = nullptr;

void run_annotate_serve(const AnnotateServeArgs& a) {
  auto camp = annotate::Campaign::open(a.campaign);
  annotate::ServerOptions opt;
  if (!a.guidelines.empty()) {
    std::ifstream in(a.guidelines, std::ios::binary);
    if (!in) throw IoError("cannot open " + a.guidelines);
    opt.guidelines.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  opt.static_dir = a.ui;
  if (!a.groups.empty()) {
    for (const auto& p : cartography::read_map_csv(a.groups)) {
      if (p.groups & cartography::kE2L) opt.groups["E2L"].insert(p.example_id);
      if (p.groups & cartography::kAmbiguous) opt.groups["A"].insert(p.example_id);
      if (p.groups & cartography::kH2L) opt.groups["H2L"].insert(p.example_id);
    }
  }
  annotate::AnnotateServer server(*camp, opt);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  int port = a.port;
  if (port == 0) {
    port = server.bind_any(a.host);
  } else if (!server.bind(a.host, port)) {
    throw IoError("cannot bind " + a.host + ":" + std::to_string(port));
  }
  std::cout << "listening on http://" << a.host << ':' << port << std::endl;
  server.listen_after_bind();
  g_server = nullptr;
}

struct CartoArgs {
  std::string dynamics, gold, out_csv, out_plot;
  double fraction = 1.0 / 3.0;
};

void run_carto(const CartoArgs& a) {
  std::unordered_map<std::string, Relation> gold;
  for (const auto& p : corpus::read_corpus(a.gold).pairs) gold[p.pair_id] = p.label;
  auto points = cartography::compute_points(cartography::read_dynamics(a.dynamics), gold);
  cartography::assign_groups(points, a.fraction);
  cartography::write_map_csv(points, a.out_csv);
  if (!a.out_plot.empty()) cartography::write_map_svg(points, a.out_plot);
  const auto dist = cartography::group_distribution(points, gold);
  for (const auto& [g, counts] : dist) {
    std::cout << g;
    for (Relation r : kAllRelations) std::cout << ' ' << to_string(r) << '=' << counts[index_of(r)];
    std::cout << '\n';
  }
  auto m = manifest_for("carto");
  m.params = {{"fraction", a.fraction}, {"points", points.size()}};
  m.add_input(a.dynamics);
  m.add_input(a.gold);
  if (!a.out_plot.empty()) m.outputs["plot"] = a.out_plot;
  write_manifest(m, a.out_csv);
}

struct ScheduleArgs {
  std::string strategy = "standard", pairs, map, similarity, out, pacing = "linear";
  std::size_t n = 0, batch = 256, steps = 4;
  double fraction = 0.5;
  bool oversample = false;
  std::uint64_t seed = 0;
  EmbeddingArgs emb;
};

void run_schedule(const ScheduleArgs& a) {
  const auto pairs = training_pairs(corpus::read_corpus(a.pairs));
  std::unordered_map<std::string, Relation> labels;
  std::vector<std::string> ids;
  for (const auto& p : pairs) {
    labels[p.pair_id] = p.label;
    ids.push_back(p.pair_id);
  }
  curriculum::PacingConfig cfg;
  cfg.total_iterations = a.n;
  cfg.batch_size = a.batch;
  cfg.curriculum_fraction = a.fraction;
  cfg.pacing = curriculum::parse_pacing(a.pacing);
  cfg.steps = a.steps;
  cfg.seed = a.seed;
  const auto pool = a.oversample ? corpus::oversample(pairs, a.seed) : ids;
  auto need_map = [&] {
    if (a.map.empty()) throw ConfigError("strategy '" + a.strategy + "' needs --dynamics map.csv");
    return cartography::read_map_csv(a.map);
  };
  curriculum::Schedule s;
  if (a.strategy == "standard") {
    s = curriculum::schedule_standard(pool, cfg);
  } else if (a.strategy == "length") {
    s = curriculum::schedule_scored(pool, curriculum::length_scores(pairs), cfg, "length");
  } else if (a.strategy == "sts") {
    std::unordered_map<std::string, double> sim;
    if (!a.similarity.empty()) {
      sim = curriculum::read_similarity(a.similarity);
    } else {
      const auto table = a.emb.load();
      trainer::FeatureExtractor fx(table, trainer::FeatureMode::Both);
      for (const auto& p : pairs)
        sim[p.pair_id] = trainer::cosine(fx.sentence_vector(p.premise), fx.sentence_vector(p.hypothesis));
    }
    s = curriculum::schedule_scored(pool, curriculum::similarity_scores(sim), cfg, "sts");
  } else if (a.strategy == "cart") {
    auto groups = curriculum::group_pools(need_map());
    if (a.oversample) groups = curriculum::balance_groups(groups, labels, a.seed);
    s = curriculum::schedule_cart_cl(groups, cfg);
  } else if (a.strategy == "cartpp") {
    s = curriculum::schedule_scored(pool, curriculum::cartography_scores(need_map()), cfg, "cartpp");
  } else if (a.strategy == "cartstrapp") {
    s = curriculum::schedule_cart_stra_clpp(curriculum::cartography_scores(need_map()), labels, cfg);
  } else {
    throw ConfigError("unknown strategy '" + a.strategy + "'");
  }
  curriculum::write_schedule(s, a.out);
  auto m = manifest_for("schedule");
  m.params = s.meta;
  m.params["phase_boundary"] = s.phase_boundary;
  m.params["oversample"] = a.oversample;
  m.seeds = {{"seed", a.seed}};
  m.add_input(a.pairs);
  if (!a.map.empty()) m.add_input(a.map);
  if (!a.similarity.empty()) m.add_input(a.similarity);
  write_manifest(m, a.out);
}

struct TrainArgs {
  std::string pairs, schedule, model = "softmax", mode = "both", dynamics_out, model_out,
      model_json, val, history_out;
  std::optional<double> c, tol;
  double lr = 0.1;
  std::size_t epochs = 10, patience = 3;
  std::uint64_t seed = 0;
  EmbeddingArgs emb;
};

void run_train(const TrainArgs& a) {
  const auto c = corpus::read_corpus(a.pairs);
  const auto table = a.emb.load();
  trainer::FeatureExtractor fx(table, trainer::parse_feature_mode(a.mode));
  const auto train = trainer::featurize_all(training_pairs(c), fx);
  std::optional<trainer::Dataset> val;
  if (!a.val.empty()) val = trainer::featurize_all(pairs_in(corpus::read_corpus(a.val), "all"), fx);
  else if (!pairs_in(c, "val").empty()) val = trainer::featurize_all(pairs_in(c, "val"), fx);

  trainer::TrainConfig cfg;
  cfg.kind = trainer::parse_model_kind(a.model);
  cfg.learning_rate = a.lr;
  cfg.c = a.c;
  cfg.tolerance = a.tol;
  cfg.epochs = a.epochs;
  cfg.patience = a.patience;
  cfg.seed = a.seed;

  std::unique_ptr<std::ofstream> dyn;
  if (!a.dynamics_out.empty()) dyn = std::make_unique<std::ofstream>(open_output(a.dynamics_out));
  trainer::DynamicsSink sink;
  if (dyn) sink = [&](const cartography::DynamicsRecord& r) { write_jsonl_line(*dyn, cartography::to_json(r)); };

  auto res = trainer::train(train, curriculum::read_schedule(a.schedule), cfg, val ? &*val : nullptr, sink);
  res.model.hyper["features"] = a.emb.to_json();
  res.model.hyper["features"]["mode"] = a.mode;
  if (a.mode == "hypothesis-only") note("premise reads: " + std::to_string(fx.premise_reads()));
  if (!a.model_out.empty()) trainer::save_model(res.model, a.model_out);
  if (!a.model_json.empty()) {
    auto out = open_output(a.model_json);
    out << trainer::to_json(res.model).dump(1) << '\n';
  }
  json hist = json::array();
  for (const auto& e : res.history) hist.push_back(trainer::to_json(e));
  if (!a.history_out.empty()) {
    auto out = open_output(a.history_out);
    out << hist.dump(2) << '\n';
  }
  note("epochs " + std::to_string(res.epochs_run) + " (" + res.stop_reason + "), digest " +
       res.model.digest());
  auto m = manifest_for("train");
  m.params = cfg.to_json();
  m.params["features"] = res.model.hyper["features"];
  m.params["stop_reason"] = res.stop_reason;
  m.params["epochs_run"] = res.epochs_run;
  m.params["model_digest"] = res.model.digest();
  m.seeds = {{"seed", a.seed}, {"embedding_seed", a.emb.seed}};
  m.add_input(a.pairs);
  m.add_input(a.schedule);
  if (!a.emb.path.empty()) m.add_input(a.emb.path);
  if (!a.dynamics_out.empty()) m.outputs["dynamics"] = a.dynamics_out;
  const std::string main_out = !a.model_out.empty() ? a.model_out : !a.dynamics_out.empty() ? a.dynamics_out : a.schedule + ".train";
  write_manifest(m, main_out);
}

struct PredictArgs {
  std::string model, pairs, out, split = "all";
  EmbeddingArgs emb;
};

void run_predict(PredictArgs a) {
  const auto model = trainer::load_model(a.model);
  std::string mode = "both";
  if (model.hyper.contains("features")) {
    const auto& f = model.hyper["features"];
    // The model's recorded feature setup wins over defaults.
    a.emb.path = f.value("embeddings", a.emb.path);
    a.emb.hashed_dim = f.value("hashed_dim", a.emb.hashed_dim);
    a.emb.oov = f.value("oov", a.emb.oov);
    a.emb.seed = f.value("embedding_seed", a.emb.seed);
    mode = f.value("mode", mode);
  }
  const auto table = a.emb.load();
  trainer::FeatureExtractor fx(table, trainer::parse_feature_mode(mode));
  auto out = open_output(a.out);
  for (const auto& p : pairs_in(corpus::read_corpus(a.pairs), a.split)) {
    const auto pr = trainer::predict(model, fx(p));
    json probs = json::object();
    for (std::size_t k = 0; k < model.classes.size(); ++k)
      probs[std::string(to_string(model.classes[k]))] = pr.probabilities[k];
    write_jsonl_line(out, json{{"pair_id", p.pair_id},
                               {"label", std::string(to_string(pr.label))},
                               {"probabilities", probs}});
  }
  auto m = manifest_for("predict");
  m.add_input(a.model);
  m.add_input(a.pairs);
  write_manifest(m, a.out);
}

std::map<std::string, Relation> read_predictions(const std::string& path) {
  std::map<std::string, Relation> out;
  read_jsonl_file(path, [&](const json& j, std::size_t lineno) {
    const auto label = parse_relation(j.at("label").get<std::string>());
    if (!label) throw DataError("unknown label", lineno);
    out[j.at("pair_id").get<std::string>()] = *label;
  });
  return out;
}

std::vector<std::pair<std::string, Relation>> read_gold(const std::string& path,
                                                        const std::string& split) {
  std::vector<std::pair<std::string, Relation>> out;
  for (const auto& p : pairs_in(corpus::read_corpus(path), split)) out.emplace_back(p.pair_id, p.label);
  return out;
}

struct EvalArgs {
  std::string gold, pred, report, split = "all";
};

void run_eval(const EvalArgs& a) {
  const auto [g, p] = eval::align_by_id(read_gold(a.gold, a.split), read_predictions(a.pred));
  const auto rep = eval::classification_report(g, p);
  const auto j = eval::to_json(rep);
  std::cout << "micro_f1 " << rep.micro_f1 << "  macro_f1 " << rep.macro_f1 << '\n';
  for (const auto& s : rep.per_class)
    std::cout << "  " << to_string(s.label) << " P=" << s.precision << " R=" << s.recall
              << " F1=" << s.f1 << " n=" << s.support << '\n';
  if (!a.report.empty()) {
    auto out = open_output(a.report);
    out << j.dump(2) << '\n';
    auto m = manifest_for("eval");
    m.add_input(a.gold);
    m.add_input(a.pred);
    write_manifest(m, a.report);
  }
}

struct CompareArgs {
  std::string gold, pred_a, pred_b, tests = "cochran,mannwhitney", report, scores_a, scores_b,
      split = "all", mwu_mode = "auto";
};

eval::MwuMode parse_mwu_mode(const std::string& s) {
  if (s == "auto") return eval::MwuMode::Auto;
  if (s == "exact") return eval::MwuMode::Exact;
  if (s == "normal") return eval::MwuMode::Normal;
  throw ConfigError("unknown Mann-Whitney mode '" + s + "'");
}

void run_compare(const CompareArgs& a) {
  const auto gold = read_gold(a.gold, a.split);
  const auto [g, pa] = eval::align_by_id(gold, read_predictions(a.pred_a));
  const auto [g2, pb] = eval::align_by_id(gold, read_predictions(a.pred_b));
  std::vector<std::vector<int>> correct;
  std::vector<double> ca, cb;
  for (std::size_t i = 0; i < g.size(); ++i) {
    correct.push_back({pa[i] == g[i] ? 1 : 0, pb[i] == g[i] ? 1 : 0});
    ca.push_back(correct.back()[0]);
    cb.push_back(correct.back()[1]);
  }
  json out{{"schema", eval::kReportSchema}, {"n", g.size()}, {"tests", json::object()}};
  for (const auto& t : split_list(a.tests)) {
    if (t == "cochran") {
      out["tests"]["cochran_q"] = eval::to_json(eval::cochran_q(correct));
    } else if (t == "mcnemar") {
      std::vector<int> ia(ca.begin(), ca.end()), ib(cb.begin(), cb.end());
      out["tests"]["mcnemar"] = eval::to_json(eval::mcnemar(ia, ib));
    } else if (t == "mannwhitney") {
      // Per-run scores when given, else per-example correctness.
      const bool runs = !a.scores_a.empty() && !a.scores_b.empty();
      auto r = runs ? eval::mann_whitney_u(read_numbers(a.scores_a), read_numbers(a.scores_b),
                                           parse_mwu_mode(a.mwu_mode))
                    : eval::mann_whitney_u(ca, cb, parse_mwu_mode(a.mwu_mode));
      auto j = eval::to_json(r);
      j["samples"] = runs ? "per-run scores" : "per-example correctness";
      out["tests"]["mann_whitney_u"] = j;
    } else {
      throw ConfigError("unknown test '" + t + "'");
    }
  }
  std::cout << out.dump(2) << '\n';
  if (!a.report.empty()) {
    auto f = open_output(a.report);
    f << out.dump(2) << '\n';
    auto m = manifest_for("eval compare");
    m.add_input(a.gold);
    m.add_input(a.pred_a);
    m.add_input(a.pred_b);
    write_manifest(m, a.report);
  }
}

struct MwuArgs {
  std::string a, b, mode = "auto";
};

void run_mwu(const MwuArgs& a) {
  const auto r = eval::mann_whitney_u(read_numbers(a.a), read_numbers(a.b), parse_mwu_mode(a.mode));
  std::cout << eval::to_json(r).dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlifoundry: NLI corpus construction, cartography and curriculum training"};
  app.set_config("--config", "", "key=value file with flag defaults");
  app.set_version_flag("--version", std::string(nlif::kVersion));
  app.require_subcommand(1);

  IngestArgs ingest_a;
  auto* ingest = app.add_subcommand("ingest", "dump -> sentences JSONL");
  ingest->add_option("--input,--dump", ingest_a.dump, "XML or JSONL dump")->required();
  ingest->add_option("--format", ingest_a.format, "auto|xml|jsonl");
  ingest->add_option("--min-len", ingest_a.min_len, "minimum sentence length in characters");
  ingest->add_option("--out", ingest_a.out, "sentences JSONL")->required();

  LabelArgs label_a;
  auto* label = app.add_subcommand("label", "sentences -> labeled pairs");
  label->add_option("--sentences", label_a.sentences)->required();
  label->add_option("--phrases", label_a.phrases, "phrase override file");
  label->add_option("--neutral-rate", label_a.neutral_rate, "keep probability for cue-free pairs");
  label->add_option("--neutral-mode", label_a.neutral_mode, "contiguous|cross-article");
  std::string keep_cues_s = "false";
  auto* keep_opt = label->add_option("--keep-cues", keep_cues_s, "true|false: leave linking phrases in hypotheses")
                       ->expected(0, 1);
  label->add_option("--seed", label_a.seed);
  label->add_option("--out", label_a.out)->required();

  SplitArgs split_a;
  auto* split = app.add_subcommand("split", "stratified train/val/test split");
  split->add_option("--corpus", split_a.corpus)->required();
  split->add_option("--ratios", split_a.ratios, "train,val,test");
  split->add_option("--seed", split_a.seed);
  split->add_option("--out", split_a.out)->required();

  StatsArgs stats_a;
  auto* stats = app.add_subcommand("stats", "split x class statistics");
  stats->add_option("--corpus", stats_a.corpus)->required();
  stats->add_flag("--table2", stats_a.table2, "print the split x class table");
  stats->add_option("--json", stats_a.json_out, "write statistics as JSON");

  OversampleArgs over_a;
  auto* over = app.add_subcommand("oversample", "balanced training id list");
  over->add_option("--corpus", over_a.corpus)->required();
  over->add_option("--seed", over_a.seed);
  over->add_option("--out", over_a.out)->required();

  auto* annot = app.add_subcommand("annotate", "manual re-annotation campaign");
  annot->require_subcommand(1);
  AnnotateCreateArgs create_a;
  auto* create = annot->add_subcommand("create", "create a campaign log");
  create->add_option("--pairs", create_a.pairs)->required();
  create->add_option("--split", create_a.split, "comma list of splits, or all");
  create->add_option("--annotators", create_a.annotators, "comma list of annotator ids")->required();
  create->add_option("--votes", create_a.votes);
  create->add_option("--campaign", create_a.campaign)->required();
  AnnotateServeArgs serve_a;
  auto* serve = annot->add_subcommand("serve", "serve a campaign over HTTP");
  serve->add_option("--campaign", serve_a.campaign)->required();
  serve->add_option("--host", serve_a.host);
  serve->add_option("--port", serve_a.port, "0 picks a free port");
  serve->add_option("--guidelines", serve_a.guidelines, "markdown instructions");
  serve->add_option("--ui", serve_a.ui, "static UI directory");
  serve->add_option("--groups", serve_a.groups, "data map CSV for /api/agreement?group=");

  CartoArgs carto_a;
  auto* carto = app.add_subcommand("carto", "training dynamics -> data map");
  carto->add_option("--dynamics", carto_a.dynamics)->required();
  carto->add_option("--gold", carto_a.gold)->required();
  carto->add_option("--fraction", carto_a.fraction);
  carto->add_option("--out-csv", carto_a.out_csv)->required();
  carto->add_option("--out-plot", carto_a.out_plot);

  ScheduleArgs sched_a;
  auto* sched = app.add_subcommand("schedule", "build a batch schedule");
  sched->add_option("--strategy", sched_a.strategy, "standard|length|sts|cart|cartpp|cartstrapp");
  sched->add_option("--pairs", sched_a.pairs, "corpus; the train split is used when present")->required();
  sched->add_option("--dynamics", sched_a.map, "data map CSV from carto");
  sched->add_option("--similarity", sched_a.similarity, "JSONL of per-pair similarity");
  sched->add_option("--n", sched_a.n, "total iterations")->required();
  sched->add_option("--batch", sched_a.batch);
  sched->add_option("--fraction", sched_a.fraction, "curriculum fraction");
  sched->add_option("--pacing", sched_a.pacing, "linear|step");
  sched->add_option("--steps", sched_a.steps);
  sched->add_flag("--oversample", sched_a.oversample, "balance classes in the pool");
  sched->add_option("--seed", sched_a.seed);
  sched->add_option("--out", sched_a.out)->required();
  sched_a.emb.add(sched);

  TrainArgs train_a;
  auto* trn = app.add_subcommand("train", "train a shallow classifier on a schedule");
  trn->add_option("--pairs", train_a.pairs)->required();
  trn->add_option("--schedule", train_a.schedule)->required();
  trn->add_option("--model", train_a.model, "softmax|svm");
  trn->add_option("--mode", train_a.mode, "both|hypothesis-only");
  trn->add_option("--val", train_a.val, "validation pairs (default: val split)");
  trn->add_option("--lr", train_a.lr);
  trn->add_option("--C", train_a.c);
  trn->add_option("--tol", train_a.tol);
  trn->add_option("--epochs", train_a.epochs);
  trn->add_option("--patience", train_a.patience);
  trn->add_option("--seed", train_a.seed);
  trn->add_option("--dynamics-out", train_a.dynamics_out);
  trn->add_option("--model-out", train_a.model_out);
  trn->add_option("--model-json", train_a.model_json);
  trn->add_option("--history-out", train_a.history_out);
  train_a.emb.add(trn);

  PredictArgs pred_a;
  auto* pred = app.add_subcommand("predict", "predict labels");
  pred->add_option("--model", pred_a.model)->required();
  pred->add_option("--pairs", pred_a.pairs)->required();
  pred->add_option("--split", pred_a.split);
  pred->add_option("--out", pred_a.out)->required();
  pred_a.emb.add(pred);

  EvalArgs eval_a;
  auto* ev = app.add_subcommand("eval", "metrics and significance tests");
  ev->add_option("--gold", eval_a.gold);
  ev->add_option("--pred", eval_a.pred);
  ev->add_option("--split", eval_a.split);
  ev->add_option("--report", eval_a.report);
  CompareArgs cmp_a;
  auto* cmp = ev->add_subcommand("compare", "compare two prediction files");
  cmp->add_option("--gold", cmp_a.gold)->required();
  cmp->add_option("--pred-a", cmp_a.pred_a)->required();
  cmp->add_option("--pred-b", cmp_a.pred_b)->required();
  cmp->add_option("--split", cmp_a.split);
  cmp->add_option("--tests", cmp_a.tests, "cochran,mcnemar,mannwhitney");
  cmp->add_option("--scores-a", cmp_a.scores_a, "per-run scores of system A");
  cmp->add_option("--scores-b", cmp_a.scores_b, "per-run scores of system B");
  cmp->add_option("--mwu-mode", cmp_a.mwu_mode, "auto|exact|normal");
  cmp->add_option("--report", cmp_a.report);
  MwuArgs mwu_a;
  auto* mwu = ev->add_subcommand("mannwhitney", "Mann-Whitney U on two number files");
  mwu->add_option("--a", mwu_a.a)->required();
  mwu->add_option("--b", mwu_a.b)->required();
  mwu->add_option("--mode", mwu_a.mode, "auto|exact|normal");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keep_opt) {
      const auto v = text::to_lower(keep_cues_s);
      if (keep_opt->results().empty() || keep_opt->results().back().empty() || v == "true" || v == "1")
        label_a.keep_cues = true;
      else if (v == "false" || v == "0")
        label_a.keep_cues = false;
      else
        throw nlif::ConfigError("--keep-cues expects true or false");
    }
    if (*ingest) run_ingest(ingest_a);
    else if (*label) run_label(label_a);
    else if (*split) run_split(split_a);
    else if (*stats) run_stats(stats_a);
    else if (*over) run_oversample(over_a);
    else if (*create) run_annotate_create(create_a);
    else if (*serve) run_annotate_serve(serve_a);
    else if (*carto) run_carto(carto_a);
    else if (*sched) run_schedule(sched_a);
    else if (*trn) run_train(train_a);
    else if (*pred) run_predict(pred_a);
    else if (*cmp) run_compare(cmp_a);
    else if (*mwu) run_mwu(mwu_a);
    else if (*ev) {
      if (eval_a.gold.empty() || eval_a.pred.empty()) throw nlif::ConfigError("eval needs --gold and --pred");
      run_eval(eval_a);
    }
  } catch (const nlif::ConfigError& e) {
    std::cerr << "nlif: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "nlif: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
