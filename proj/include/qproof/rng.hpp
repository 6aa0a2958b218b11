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
#include <random>

namespace qproof {

/// Seedable random source shared by every sampling routine.
///
/// All draws are derived from raw 64-bit engine output (no standard
/// distributions), so a given seed yields the same stream on every platform.
/// Sessions get independent streams via `Rng::for_stream`, which makes Monte
/// Carlo results independent of how sessions are scheduled across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream `stream` of master seed `seed`.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x71u};
    Rng rng(0);
    rng.engine_.seed(seq);
    return rng;
  }

  std::uint64_t next() { return engine_(); }

  bool bit() { return (engine_() >> 63) != 0; }

  /// Uniform in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection sampling on the largest multiple of bound.
    const std::uint64_t limit = -bound % bound;
    for (;;) {
      const std::uint64_t v = engine_();
      if (v >= limit) return v % bound;
    }
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qproof
