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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qproof/bits.hpp"
#include "qproof/rng.hpp"
#include "qproof/tdp.hpp"

namespace qproof {

/// cos²(π/8) = (2 + √2) / 4, the CHSH-optimal agreement of the rotated bases.
inline constexpr double kCos2PiOver8 = 0.85355339059327376220;

/// |x0⟩ + phase·|x1⟩ (unnormalized), canonicalized so that x0 < x1.
/// Swapping the two terms only changes a global phase, so `phase` is kept.
struct TwoTermState {
  BitString x0;
  BitString x1;
  int phase = +1;

  /// Orders the terms and validates x0 ≠ x1, equal lengths, phase ∈ {±1}.
  static TwoTermState make(BitString a, BitString b, int phase = +1);

  std::size_t n() const noexcept { return x0.size(); }
  BitString difference() const { return x0 ^ x1; }

  friend bool operator==(const TwoTermState&, const TwoTermState&) = default;
};

/// amp0|0⟩ + amp1|1⟩ with real amplitudes.
struct QubitState {
  double amp0 = 1.0;
  double amp1 = 0.0;

  static QubitState basis(bool b) { return b ? QubitState{0.0, 1.0} : QubitState{1.0, 0.0}; }
  /// (|0⟩ + sign|1⟩)/√2.
  static QubitState hadamard(int sign);

  bool is_normalized(double tol = 1e-12) const;
};

/// Uniform superposition over `support` (codes of n-bit strings, sorted).
/// Every state produced by the hashing phase has this form.
struct EnumeratedState {
  std::size_t n = 0;
  std::vector<std::uint32_t> support;

  double amplitude() const;
  std::vector<std::pair<BitString, double>> entries() const;
  nlohmann::json to_json() const;
};

/// Computational-basis measurement of |x0⟩+|x1⟩: each term w.p. 1/2.
BitString measure_computational(const TwoTermState& state, Rng& rng);

struct CollapseResult {
  BitString d;
  QubitState qubit;
};

/// Writes r·x into a fresh qubit, measures the n-qubit register in the
/// Hadamard basis, and returns the outcome d with the remaining qubit.
///
/// With Δ = x0⊕x1 and b_i = r·x_i: if b0 = b1 the qubit is |b0⟩ and d is
/// uniform on the coset {d : (−1)^{d·Δ} = phase}; otherwise d is uniform on
/// {0,1}^n and the qubit is (|0⟩ + phase·(−1)^{d·Δ}|1⟩)/√2 with amp0 ≥ 0.
CollapseResult hadamard_collapse(const TwoTermState& state, const BitString& r, Rng& rng);

/// Born probability of outcome `eta` when measuring `q` in the rotated basis
/// selected by v2. v2 = 0: {cos·|0⟩+sin·|1⟩, sin·|0⟩−cos·|1⟩};
/// v2 = 1: {cos·|0⟩−sin·|1⟩, sin·|0⟩+cos·|1⟩}, angle π/8.
double rotated_outcome_probability(const QubitState& q, bool v2, bool eta);
bool measure_rotated(const QubitState& q, bool v2, Rng& rng);

/// Coherent simulation of the hashing phase by explicit enumeration of the
/// prover's register: starts at the uniform superposition over {0,1}^n and
/// collapses on each measured h·f(x).
class EnumeratingRegister {
 public:
  explicit EnumeratingRegister(const TdpKey& key,
                               std::size_t exhaustive_bound = kDefaultExhaustiveBound);

  /// Measures h·f(x) on the current state; c = 1 w.p. |X^{(1)}|/|X|.
  bool measure_hash(const BitString& h, Rng& rng);
  /// Projects onto h·f(x) = c. Throws ContractViolation if that branch is empty.
  void postselect(const BitString& h, bool c);

  const EnumeratedState& state() const noexcept { return state_; }
  /// Valid once exactly two strings remain.
  TwoTermState two_term_state() const;

 private:
  std::size_t count_ones(const BitString& h) const;
  void keep(const BitString& h, bool c);

  EnumeratedState state_;
  std::vector<BitString> images_;  // f(x) for every x in {0,1}^n
};

struct BruteForceSession {
  std::vector<std::uint8_t> answers;
  std::vector<EnumeratedState> trajectory;  // X_0, X_1, ..., X_{n-1}
};

/// Runs every hashing round on an EnumeratingRegister. When `forced` is
/// given the answers are post-selected instead of sampled.
BruteForceSession brute_force_session(const TdpKey& key, const HashQuerySet& queries, Rng& rng,
                                      std::optional<std::span<const std::uint8_t>> forced = {});

}  // namespace qproof
