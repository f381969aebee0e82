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

// Distant supervision over adjacent sentences: when the second sentence of a
// contiguous pair opens with a linking phrase, the pair takes the phrase's
// category and the phrase is cut from the hypothesis. Cue-free pairs become
// neutral candidates, sampled at a configurable rate.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlifoundry/core/hash.hpp"
#include "nlifoundry/core/text.hpp"
#include "nlifoundry/ingest/sentences.hpp"
#include "nlifoundry/labeler/labeled_pair.hpp"
#include "nlifoundry/labeler/phrase_table.hpp"

namespace nlif::labeler {

// Byte range [begin, end) into the original UTF-8 sentence.
struct CueSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct CueMatch {
  LinkingPhrase phrase;
  CueSpan span;
};

// Case-insensitive, sentence-initial, longest match. `sentence` is expected
// in normalize_text form.
inline std::optional<CueMatch> match_cue(std::string_view sentence, const PhraseTable& table) {
  // Lowercase code point by code point, remembering where each lowered code
  // point ends in the original text.
  std::string lowered;
  std::vector<std::size_t> orig_end_at;  // indexed by lowered byte end
  lowered.reserve(64);
  orig_end_at.reserve(64);
  for (std::size_t pos = 0; pos < sentence.size() && lowered.size() < 256;) {
    const char32_t cp = text::next_code_point(sentence, pos);
    const std::size_t before = lowered.size();
    text::append(lowered, text::to_lower(cp));
    orig_end_at.resize(lowered.size() + 1, 0);
    for (std::size_t k = before + 1; k <= lowered.size(); ++k) orig_end_at[k] = pos;
  }
  const auto m = table.longest_prefix(lowered);
  if (!m) return std::nullopt;
  return CueMatch{table.phrases()[m->phrase], CueSpan{0, orig_end_at[m->key_bytes]}};
}

// Drops the cue, one following comma or colon and surrounding whitespace, and
// capitalizes what remains. Returns nothing when no word is left.
inline std::optional<std::string> remove_cue(std::string_view sentence, CueSpan span) {
  std::size_t pos = std::min(span.end, sentence.size());
  auto skip_ws = [&] {
    while (pos < sentence.size()) {
      std::size_t next = pos;
      if (!text::is_space(text::next_code_point(sentence, next))) break;
      pos = next;
    }
  };
  skip_ws();
  if (pos < sentence.size() && (sentence[pos] == ',' || sentence[pos] == ':')) ++pos;
  skip_ws();
  std::string rest(sentence.substr(0, span.begin));
  rest.append(sentence.substr(pos));
  bool has_word = false;
  for (std::size_t p = 0; p < rest.size() && !has_word;)
    has_word = text::is_alnum(text::next_code_point(rest, p));
  if (!has_word) return std::nullopt;
  return text::upper_first(rest);
}

enum class NeutralMode { Contiguous, CrossArticle };

inline NeutralMode parse_neutral_mode(std::string_view s) {
  if (s == "contiguous") return NeutralMode::Contiguous;
  if (s == "cross-article") return NeutralMode::CrossArticle;
  throw ConfigError("unknown neutral mode '" + std::string(s) + "'");
}

struct ExtractOptions {
  // Probability of keeping a cue-free pair. Unset: chosen so that neutral
  // pairs make up `neutral_target_share` of the output.
  std::optional<double> neutral_rate;
  double neutral_target_share = 0.49;
  NeutralMode neutral_mode = NeutralMode::Contiguous;
  bool keep_cues = false;
  std::uint64_t seed = 0;
};

struct ExtractResult {
  std::vector<LabeledPair> pairs;
  std::size_t cue_pairs = 0;
  std::size_t neutral_candidates = 0;
  double neutral_rate = 0.0;
  std::size_t discarded_empty = 0;      // cue removal left nothing
  std::size_t premise_cue_pairs = 0;    // both sentences opened with a cue
  std::size_t cross_article_skipped = 0;
};

namespace detail {

inline bool same_section(const ingest::Sentence& a, const ingest::Sentence& b) {
  return a.article_id == b.article_id && a.section_path == b.section_path;
}

}  // namespace detail

// Sentences must be grouped by (article, section) in document order, as
// split_sentences produces them. Only sentences with consecutive
// index_in_section values form a pair.
inline ExtractResult extract_pairs(const std::vector<ingest::Sentence>& sentences,
                                   const PhraseTable& table, const ExtractOptions& opt = {}) {
  ExtractResult res;
  std::vector<std::optional<CueMatch>> cues;
  cues.reserve(sentences.size());
  for (const auto& s : sentences) cues.push_back(match_cue(s.text, table));

  struct Slot {
    std::size_t premise;
    std::optional<LabeledPair> cue_pair;  // set for cue pairs
  };
  std::vector<Slot> slots;
  for (std::size_t i = 0; i + 1 < sentences.size(); ++i) {
    const auto& prem = sentences[i];
    const auto& hyp = sentences[i + 1];
    if (!detail::same_section(prem, hyp) || hyp.index_in_section != prem.index_in_section + 1)
      continue;
    Slot slot{i, std::nullopt};
    if (cues[i + 1]) {
      const auto& cue = *cues[i + 1];
      std::optional<std::string> hyp_text;
      if (opt.keep_cues) {
        hyp_text = hyp.text;
      } else {
        hyp_text = remove_cue(hyp.text, cue.span);
      }
      if (!hyp_text) {
        ++res.discarded_empty;
        continue;
      }
      LabeledPair p;
      p.pair_id = make_pair_id(prem.article_id, prem.section_path, prem.index_in_section);
      p.premise = prem.text;
      p.hypothesis = std::move(*hyp_text);
      p.label = cue.phrase.category;
      p.cue = cue.phrase;
      Provenance src{prem.article_id, prem.section_path, prem.index_in_section,
                     hyp.article_id, hyp.index_in_section, std::nullopt};
      if (cues[i]) {
        src.premise_cue = cues[i]->phrase.surface;
        ++res.premise_cue_pairs;
      }
      p.source = std::move(src);
      slot.cue_pair = std::move(p);
      ++res.cue_pairs;
    } else {
      ++res.neutral_candidates;
    }
    slots.push_back(std::move(slot));
  }

  if (opt.neutral_rate) {
    res.neutral_rate = *opt.neutral_rate;
  } else if (res.neutral_candidates > 0 && opt.neutral_target_share < 1.0) {
    const double wanted = opt.neutral_target_share / (1.0 - opt.neutral_target_share) *
                          static_cast<double>(res.cue_pairs);
    res.neutral_rate = std::min(1.0, wanted / static_cast<double>(res.neutral_candidates));
  }
  if (res.neutral_rate < 0.0 || res.neutral_rate > 1.0)
    throw ConfigError("neutral rate must be in [0, 1]");

  // Cue-free sentences of the whole input, for cross-article hypotheses.
  std::vector<std::size_t> cue_free;
  if (opt.neutral_mode == NeutralMode::CrossArticle) {
    for (std::size_t i = 0; i < sentences.size(); ++i)
      if (!cues[i]) cue_free.push_back(i);
  }

  for (auto& slot : slots) {
    if (slot.cue_pair) {
      res.pairs.push_back(std::move(*slot.cue_pair));
      continue;
    }
    const auto& prem = sentences[slot.premise];
    const std::string id = make_pair_id(prem.article_id, prem.section_path, prem.index_in_section);
    if (hash_unit(id, opt.seed) >= res.neutral_rate) continue;
    std::size_t hyp_index = slot.premise + 1;
    if (opt.neutral_mode == NeutralMode::CrossArticle) {
      Rng rng(splitmix64(fnv1a64(id) ^ opt.seed));
      std::optional<std::size_t> pick;
      for (int attempt = 0; attempt < 64 && !cue_free.empty(); ++attempt) {
        const std::size_t c = cue_free[uniform_index(rng, cue_free.size())];
        if (sentences[c].article_id != prem.article_id) {
          pick = c;
          break;
        }
      }
      if (!pick) {
        ++res.cross_article_skipped;
        continue;
      }
      hyp_index = *pick;
    }
    const auto& hyp = sentences[hyp_index];
    LabeledPair p;
    p.pair_id = id;
    p.premise = prem.text;
    p.hypothesis = hyp.text;
    p.label = Relation::Neutral;
    p.source = Provenance{prem.article_id, prem.section_path, prem.index_in_section,
                          hyp.article_id, hyp.index_in_section, std::nullopt};
    if (cues[slot.premise]) p.source->premise_cue = cues[slot.premise]->phrase.surface;
    res.pairs.push_back(std::move(p));
  }
  return res;
}

}  // namespace nlif::labeler
