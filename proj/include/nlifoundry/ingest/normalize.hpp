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

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <string>
#include <string_view>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/text.hpp"

namespace nlif::ingest {

// Maps the legacy cedilla letters to the comma-below letters of standard
// Romanian orthography.
inline constexpr char32_t romanian_comma_below(char32_t cp) {
  switch (cp) {
    case 0x015E: return 0x0218;  // Ş -> Ș
    case 0x015F: return 0x0219;  // ş -> ș
    case 0x0162: return 0x021A;  // Ţ -> Ț
    case 0x0163: return 0x021B;  // ţ -> ț
    default: return cp;
  }
}

// Canonical form used by all downstream matching: NFC, comma-below diacritics,
// whitespace runs collapsed to one ASCII space, no leading/trailing space.
inline std::string normalize_text(std::string_view input) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  const auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(input.data(), static_cast<int32_t>(input.size())));
  icu::UnicodeString composed = nfc->normalize(src, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string utf8;
  composed.toUTF8String(utf8);

  std::string out;
  out.reserve(utf8.size());
  bool pending_space = false;
  for (std::size_t pos = 0; pos < utf8.size();) {
    const char32_t cp = text::next_code_point(utf8, pos);
    if (text::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    text::append(out, romanian_comma_below(cp));
  }
  return out;
}

}  // namespace nlif::ingest
