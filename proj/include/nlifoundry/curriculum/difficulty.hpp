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

#include <cmath>
#include <string>

#include "nlifoundry/core/error.hpp"

namespace nlif::curriculum {

// Difficulty in [0, 3] from cartography confidence c and variability v.
// Confidently learned points (c > 0.5) land in [0, 1.5] and get harder as
// they fluctuate more; the rest land in [1.5, 3] and get easier as they
// fluctuate more.
inline double difficulty_score(double c, double v) {
  if (!(c >= 0.0 && c <= 1.0))
    throw DomainError("confidence must be in [0, 1], got " + std::to_string(c));
  if (!(v >= 0.0 && v <= 1.0))
    throw DomainError("variability must be in [0, 1], got " + std::to_string(v));
  return c > 0.5 ? 1.0 - c + v : 3.0 - c - v;
}

}  // namespace nlif::curriculum
