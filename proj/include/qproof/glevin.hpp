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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qproof/bits.hpp"
#include "qproof/poq.hpp"
#include "qproof/rng.hpp"
#include "qproof/rsp.hpp"

namespace qproof {

// Extraction from a classical prover that beats the 7/8 bound.
//
// A classical prover can be rewound: run its v1 = 1 round once to get d, then
// answer both v2 = 0 and v2 = 1 from copies of the same state. If both
// answers would be accepted, their XOR is r·(x0⊕x1). That gives a predictor
// for the inner product with x0⊕x1, which Goldreich-Levin list decoding
// turns into x0⊕x1 itself; together with one accepted v1 = 0 answer x′ this
// names Alice's whole pair {x′, x′⊕z}.

/// A possibly noisy oracle for r ↦ r·s.
using Predictor = std::function<bool(const BitString& r)>;

struct AlgorithmBTrace {
  bool well_formed = true;
  BitString d;
  std::uint8_t eta0 = 0;  // continuation with v2 = 0
  std::uint8_t eta1 = 0;  // continuation with v2 = 1
  bool output = false;
};

/// Runs the v1 = 1 round of a copy of `prover` on challenge r, then both
/// v2 continuations from copies of the resulting state, reusing the same d.
/// Outputs η_{1,0} ⊕ η_{1,1}. If the prover misbehaves the output is a
/// uniform bit from `rng` and `well_formed` is false.
AlgorithmBTrace algorithm_B_trace(const Prover& prover, const BitString& r, Rng& rng);
bool algorithm_B(const Prover& prover, const BitString& r, Rng& rng);

struct GlParameters {
  std::size_t seeds = 0;           // m: log2 of the number of guesses
  std::size_t verification = 0;    // fresh samples used to score candidates
  double threshold = 0.0;          // minimum score 1/2 + ε/2
};

/// m = ⌈log2(n / (δ ε²))⌉ pairwise-independent seeds; scoring uses
/// ⌈8 (m ln 2 + ln(1/δ)) / ε²⌉ fresh samples so that no candidate with
/// agreement below 1/2 + ε/4 clears the threshold except with probability δ.
GlParameters gl_parameters(std::size_t n, double epsilon, double delta);

struct GlCandidate {
  BitString z;
  double score = 0.0;
};

/// Goldreich-Levin list decoding. For every guess of the inner products
/// of m random seeds with s, each bit of s is recovered by a majority vote
/// of predictor(r_J ⊕ e_i) ⊕ (guessed r_J·s) over all 2^m − 1 subset sums
/// r_J; the votes for all guesses are computed at once with a Walsh-Hadamard
/// transform. Distinct candidates are scored on fresh samples and those
/// reaching 1/2 + ε/2 are returned, best first.
///
/// Requires n >= 1, 0 < ε <= 1/2, 0 < δ < 1; otherwise ConfigurationError.
std::vector<GlCandidate> gl_extract(const Predictor& predictor, std::size_t n, double epsilon,
                                    double delta, Rng& rng);

struct ExtractionResult {
  BitString z;
  std::optional<StringPair> pair;
  /// Alice's true pair, kept so callers can judge the attack.
  StringPair alice_pair;
  bool success = false;
  std::size_t candidates = 0;
};

struct AlgorithmCConfig {
  double epsilon = 0.25;
  double delta = 0.05;
};

/// The composed attack: run the RSP phase against a fresh prover, keep its
/// state, ask a copy for a v1 = 0 answer x′, list-decode z from
/// algorithm_B, and output {x′, x′⊕z} for the best nonzero candidate.
ExtractionResult algorithm_C(const std::function<std::unique_ptr<Prover>(Rng)>& prover_factory,
                             const SharedKeyPair& keypair, Rng& rng,
                             const AlgorithmCConfig& config = {});

}  // namespace qproof
