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

#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/text.hpp"

namespace nlif {

using json = nlohmann::json;

// Calls fn(record, line_number) for every non-blank line. Parse failures are
// reported as DataError with the 1-based line number.
inline void read_jsonl(std::istream& in, const std::function<void(const json&, std::size_t)>& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    try {
      fn(j, lineno);
    } catch (const json::exception& e) {
      throw DataError(std::string("bad record: ") + e.what(), lineno);
    }
  }
}

inline void read_jsonl_file(const std::string& path,
                            const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  read_jsonl(in, fn);
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

// Invalid UTF-8 is replaced rather than thrown on.
inline std::string dump_compact(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

inline void write_jsonl_line(std::ostream& out, const json& j) { out << dump_compact(j) << '\n'; }

}  // namespace nlif
