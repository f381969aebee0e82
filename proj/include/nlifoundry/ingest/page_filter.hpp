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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlifoundry/core/text.hpp"
#include "nlifoundry/ingest/dump_reader.hpp"

namespace nlif::ingest {

enum class DropReason { Namespace = 0, Redirect = 1, Disambiguation = 2 };

inline constexpr std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::Namespace: return "namespace";
    case DropReason::Redirect: return "redirect";
    case DropReason::Disambiguation: return "disambiguation";
  }
  return "namespace";
}

struct PageFilterConfig {
  std::string disambiguation_suffix = "(dezambiguizare)";
  // Lowercased template names that mark a disambiguation page.
  std::vector<std::string> disambiguation_templates = {"dezambiguizare", "dezambig",
                                                       "disambig", "disambiguation"};
  // Lowercased magic words that start a redirect page.
  std::vector<std::string> redirect_prefixes = {"#redirect", "#redirecționare",
                                                "#redirectare"};
};

// Returns the single reason a page is dropped, or nothing if it is kept.
// Checks run in the order namespace, redirect, disambiguation.
inline std::optional<DropReason> classify_page(const RawPage& page, const PageFilterConfig& cfg) {
  if (page.ns != 0) return DropReason::Namespace;
  if (page.redirect) return DropReason::Redirect;
  const std::string head = text::to_lower(text::trim(page.wikitext).substr(0, 64));
  for (const auto& prefix : cfg.redirect_prefixes) {
    if (text::starts_with(head, prefix)) return DropReason::Redirect;
  }
  if (!cfg.disambiguation_suffix.empty() &&
      text::ends_with(text::trim(page.title), cfg.disambiguation_suffix))
    return DropReason::Disambiguation;
  const std::string lower = text::to_lower(page.wikitext);
  for (const auto& name : cfg.disambiguation_templates) {
    for (const char* open : {"{{", "{{ "}) {
      const std::string marker = open + name;
      for (auto p = lower.find(marker); p != std::string::npos; p = lower.find(marker, p + 1)) {
        const char after = p + marker.size() < lower.size() ? lower[p + marker.size()] : '}';
        if (after == '}' || after == '|' || after == ' ') return DropReason::Disambiguation;
      }
    }
  }
  return std::nullopt;
}

// Keeps main-namespace articles and counts the reason for every drop.
class PageFilter {
 public:
  explicit PageFilter(PageFilterConfig cfg = {}) : cfg_(std::move(cfg)) {}

  std::optional<RawPage> operator()(RawPage page) {
    if (auto reason = classify_page(page, cfg_)) {
      ++dropped_[static_cast<std::size_t>(*reason)];
      return std::nullopt;
    }
    ++kept_;
    return page;
  }

  std::size_t kept() const { return kept_; }
  std::size_t dropped(DropReason r) const { return dropped_[static_cast<std::size_t>(r)]; }
  std::size_t dropped_total() const { return dropped_[0] + dropped_[1] + dropped_[2]; }

 private:
  PageFilterConfig cfg_;
  std::size_t kept_ = 0;
  std::array<std::size_t, 3> dropped_{};
};

}  // namespace nlif::ingest
