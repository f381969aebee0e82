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

namespace nlif::labeler {
namespace {

const PhraseTable& table() {
  static const PhraseTable t = load_phrase_table();
  return t;
}

ingest::Sentence sent(std::string text, std::int64_t idx, std::int64_t article = 1,
                      std::string section = "") {
  text = ingest::normalize_text(text);
  const auto len = static_cast<std::int64_t>(text::length(text));
  return {std::move(text), article, std::move(section), idx, len};
}

TEST(Relation, ParseAndAliases) {
  EXPECT_EQ(parse_relation("causal"), Relation::Reasoning);
  EXPECT_EQ(parse_relation("Reasoning"), Relation::Reasoning);
  EXPECT_EQ(parse_relation("neutral"), Relation::Neutral);
  EXPECT_FALSE(parse_relation("other").has_value());
  EXPECT_THROW(relation_from_string("other"), DomainError);
  for (Relation r : kAllRelations) EXPECT_EQ(parse_relation(to_string(r)), r);
}

TEST(PhraseTable, BuiltInInventory) {
  EXPECT_EQ(table().size(), 62u);
  EXPECT_EQ(table().count(Relation::Contrastive), 19u);
  EXPECT_EQ(table().count(Relation::Entailment), 19u);
  EXPECT_EQ(table().count(Relation::Reasoning), 24u);
  EXPECT_EQ(table().count(Relation::Neutral), 0u);
  const auto* p = table().find("Pe de altă parte");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->category, Relation::Contrastive);
  ASSERT_NE(table().find("Astfel"), nullptr);
  ASSERT_NE(table().find("Astfel că"), nullptr);
  EXPECT_EQ(table().find("Astfel")->category, Relation::Reasoning);
  EXPECT_EQ(table().find("Astfel că")->category, Relation::Reasoning);
}

TEST(PhraseTable, OverridesValidated) {
  PhraseOverrides neutral;
  neutral.add.emplace_back(Relation::Neutral, "Oricum");
  EXPECT_THROW(load_phrase_table(neutral), ConfigError);
  PhraseOverrides dup;
  dup.add.emplace_back(Relation::Reasoning, "prin URMARE");
  EXPECT_THROW(load_phrase_table(dup), ConfigError);
  PhraseOverrides unknown;
  unknown.remove.push_back("Nu există");
  EXPECT_THROW(load_phrase_table(unknown), ConfigError);
}

TEST(PhraseTable, SampleOverrideFile) {
  const auto ov = read_phrase_overrides(std::string(NLIF_SAMPLES_DIR) + "/phrases.tsv");
  const auto t = load_phrase_table(ov);
  EXPECT_EQ(t.size(), 63u);
  EXPECT_EQ(t.find("Pe larg"), nullptr);
  ASSERT_NE(t.find("Totuși"), nullptr);
  EXPECT_EQ(t.find("Totuși")->category, Relation::Contrastive);
}

TEST(PhraseTable, BadOverrideLineHasLineNumber) {
  synth::TempDir dir;
  const auto path = dir.file("ov.tsv");
  std::ofstream(path) << "# c\nadd\treasoning\tDeci\nadd\tweird\tX\n";
  try {
    read_phrase_overrides(path);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(MatchCue, LongestMatchWins) {
  const auto m = match_cue("Astfel că planul a eșuat complet în prima zi.", table());
  ASSERT_TRUE(m);
  EXPECT_EQ(m->phrase.normalized, "astfel că");
  EXPECT_EQ(m->span.begin, 0u);
  EXPECT_EQ(m->span.end, std::string("Astfel că").size());
}

TEST(MatchCue, Examples) {
  const auto m = match_cue("În concluzie, economia a crescut.", table());
  ASSERT_TRUE(m);
  EXPECT_EQ(m->phrase.category, Relation::Reasoning);
  EXPECT_EQ(m->phrase.surface, "În concluzie");
  EXPECT_FALSE(match_cue("Economia, în contrast, a scăzut.", table()));
  // Word boundary: "Astfelul" is not "Astfel".
  EXPECT_FALSE(match_cue("Astfelul nu este un cuvânt.", table()));
  // Case-insensitive, including non-ASCII capitals.
  EXPECT_TRUE(match_cue("ÎN CONCLUZIE economia a crescut.", table()));
  // Cedilla variant after normalization.
  EXPECT_TRUE(match_cue(ingest::normalize_text("Aşadar, am plecat."), table()));
}

TEST(MatchCue, SpanIsInOriginalBytes) {
  const std::string s = "ÎN CONTRAST, prețurile au scăzut.";
  const auto m = match_cue(s, table());
  ASSERT_TRUE(m);
  EXPECT_EQ(s.substr(m->span.begin, m->span.end - m->span.begin), "ÎN CONTRAST");
}

TEST(MatchCue, EveryPrefixPairPrefersTheLongerPhrase) {
  std::size_t checked = 0;
  for (const auto& shorter : table().phrases()) {
    for (const auto& longer : table().phrases()) {
      if (longer.normalized.size() <= shorter.normalized.size() ||
          longer.normalized.compare(0, shorter.normalized.size(), shorter.normalized) != 0)
        continue;
      const auto m = match_cue(longer.surface + " drumul a continuat.", table());
      ASSERT_TRUE(m) << longer.surface;
      EXPECT_EQ(m->phrase.normalized, longer.normalized);
      ++checked;
    }
  }
  EXPECT_GE(checked, 1u);  // at least Astfel / Astfel că
}

TEST(RemoveCue, Examples) {
  auto cut = [](const std::string& s) {
    const auto m = match_cue(s, table());
    EXPECT_TRUE(m) << s;
    return remove_cue(s, m->span);
  };
  EXPECT_EQ(cut("În contrast, prețurile au scăzut."), "Prețurile au scăzut.");
  EXPECT_EQ(cut("Astfel planul a eșuat."), "Planul a eșuat.");
  EXPECT_EQ(cut("Adică: totul e bine."), "Totul e bine.");
  EXPECT_EQ(cut("Prin urmare,"), std::nullopt);
  EXPECT_EQ(cut("Prin urmare, ."), std::nullopt);
}

TEST(ExtractPairs, ReasoningPair) {
  const std::vector<ingest::Sentence> s = {
      sent("A fost secetă lungă în acea vară peste tot.", 0),
      sent("Prin urmare recolta a fost compromisă aproape integral.", 1)};
  ExtractOptions opt;
  opt.neutral_rate = 0.0;
  const auto r = extract_pairs(s, table(), opt);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].label, Relation::Reasoning);
  EXPECT_EQ(r.pairs[0].hypothesis, "Recolta a fost compromisă aproape integral.");
  EXPECT_EQ(r.pairs[0].premise, s[0].text);
  ASSERT_TRUE(r.pairs[0].cue);
  EXPECT_EQ(r.pairs[0].cue->surface, "Prin urmare");
}

TEST(ExtractPairs, NeutralPair) {
  const std::vector<ingest::Sentence> s = {sent("Orașul are un port mare.", 0),
                                           sent("Clima este blândă tot anul.", 1)};
  ExtractOptions opt;
  opt.neutral_rate = 1.0;
  const auto r = extract_pairs(s, table(), opt);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].label, Relation::Neutral);
  EXPECT_FALSE(r.pairs[0].cue);
}

TEST(ExtractPairs, SingleSentenceAndGaps) {
  ExtractOptions opt;
  opt.neutral_rate = 1.0;
  EXPECT_TRUE(extract_pairs({sent("Singura propoziție.", 0)}, table(), opt).pairs.empty());
  // A dropped sentence between them breaks adjacency.
  EXPECT_TRUE(
      extract_pairs({sent("Prima.", 0), sent("Prin urmare a treia.", 2)}, table(), opt).pairs.empty());
  // Different sections or articles never pair.
  EXPECT_TRUE(extract_pairs({sent("Prima.", 0, 1, "A"), sent("Prin urmare alta.", 1, 1, "B")},
                            table(), opt)
                  .pairs.empty());
}

TEST(ExtractPairs, PremiseCueIsRecordedNotLabelled) {
  const std::vector<ingest::Sentence> s = {sent("Prin urmare ploua.", 0),
                                           sent("În contrast, azi e soare.", 1)};
  const auto r = extract_pairs(s, table(), {});
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].label, Relation::Contrastive);
  ASSERT_TRUE(r.pairs[0].source);
  EXPECT_EQ(r.pairs[0].source->premise_cue, "Prin urmare");
  EXPECT_EQ(r.premise_cue_pairs, 1u);
}

TEST(ExtractPairs, EmptyAfterRemovalIsCounted) {
  const auto r = extract_pairs({sent("Ceva.", 0), sent("Prin urmare,", 1)}, table(), {});
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_EQ(r.discarded_empty, 1u);
}

TEST(ExtractPairs, KeepCues) {
  ExtractOptions opt;
  opt.keep_cues = true;
  const auto r = extract_pairs({sent("Ceva.", 0), sent("Prin urmare, altceva.", 1)}, table(), opt);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].hypothesis, "Prin urmare, altceva.");
  EXPECT_EQ(r.pairs[0].label, Relation::Reasoning);
}

TEST(ExtractPairs, AutoNeutralRateTargetsShare) {
  const auto pc = synth::planted_articles(400, table(), 21, 0.3);
  const auto r = extract_pairs(pc.sentences, table(), {});
  std::size_t neutral = 0;
  for (const auto& p : r.pairs) neutral += p.label == Relation::Neutral;
  const double share = static_cast<double>(neutral) / static_cast<double>(r.pairs.size());
  EXPECT_NEAR(share, 0.49, 0.05);
}

TEST(ExtractPairs, CrossArticleNeutrals) {
  const auto pc = synth::planted_articles(50, table(), 8, 0.2);
  ExtractOptions opt;
  opt.neutral_rate = 1.0;
  opt.neutral_mode = NeutralMode::CrossArticle;
  const auto r = extract_pairs(pc.sentences, table(), opt);
  std::size_t neutral = 0;
  for (const auto& p : r.pairs) {
    if (p.label != Relation::Neutral) continue;
    ++neutral;
    ASSERT_TRUE(p.source);
    EXPECT_NE(p.source->article_id, p.source->hypothesis_article_id);
    EXPECT_FALSE(match_cue(p.hypothesis, table()));
  }
  EXPECT_GT(neutral, 0u);
}

TEST(ExtractPairs, Deterministic) {
  const auto pc = synth::planted_articles(60, table(), 4);
  ExtractOptions opt;
  opt.seed = 99;
  EXPECT_EQ(extract_pairs(pc.sentences, table(), opt).pairs,
            extract_pairs(pc.sentences, table(), opt).pairs);
}

TEST(ExtractPairs, PlantedRoundTripProperty) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto pc = synth::planted_articles(80, table(), seed);
    ExtractOptions opt;
    opt.neutral_rate = 1.0;
    const auto r = extract_pairs(pc.sentences, table(), opt);
    EXPECT_EQ(r.pairs.size(), pc.expected.size());
    for (const auto& p : r.pairs) {
      const auto it = pc.expected.find(p.pair_id);
      ASSERT_NE(it, pc.expected.end());
      EXPECT_EQ(p.label, it->second);
      if (p.label == Relation::Neutral) {
        EXPECT_FALSE(p.cue);
      } else {
        ASSERT_TRUE(p.cue);
        EXPECT_EQ(p.cue->normalized, pc.expected_cue.at(p.pair_id));
        EXPECT_FALSE(text::starts_with(p.hypothesis, p.cue->surface));
        EXPECT_FALSE(text::starts_with(text::to_lower(p.hypothesis), p.cue->normalized));
      }
    }
  }
}

TEST(LabeledPairJson, RoundTrip) {
  const std::vector<ingest::Sentence> s = {sent("Prin urmare ploua.", 0),
                                           sent("În contrast, azi e soare.", 1)};
  const auto r = extract_pairs(s, table(), {});
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(pair_from_json(to_json(r.pairs[0])), r.pairs[0]);
}

}  // namespace
}  // namespace nlif::labeler
