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

#include <cstdint>
#include <string>

#include "nlifoundry/core/hash.hpp"
#include "nlifoundry/core/jsonl.hpp"

namespace nlif {

inline constexpr const char* kVersion = "0.1.0";

// Run record written next to every CLI output.
struct Manifest {
  std::string command;
  json params = json::object();
  json seeds = json::object();
  json inputs = json::object();   // path -> digest
  json outputs = json::object();  // name -> path

  void add_input(const std::string& path) { inputs[path] = file_digest(path); }

  json to_json() const {
    return json{{"tool", "nlifoundry"}, {"version", kVersion}, {"command", command},
                {"params", params},     {"seeds", seeds},      {"inputs", inputs},
                {"outputs", outputs}};
  }

  void write(const std::string& path) const {
    auto out = open_output(path);
    out << to_json().dump(2) << '\n';
  }
};

}  // namespace nlif
