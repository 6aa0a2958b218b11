// Copyright 2026 The qproof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qproof {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Reduced-size versions of the property suites: solver and permutation
/// oracles, the collapse shortcut, RSP correctness, acceptance rates, the
/// extractor, and the frame format. Runs in well under a minute.
std::vector<SelftestCheck> run_selftest(std::uint64_t seed = 1);

}  // namespace qproof
