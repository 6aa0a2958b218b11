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

#include "qproof/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qproof/errors.hpp"

namespace qproof {
namespace {

const double kCosPiOver8 = std::cos(std::numbers::pi / 8);
const double kSinPiOver8 = std::sin(std::numbers::pi / 8);

// Row `eta` of the measurement basis selected by v2.
std::pair<double, double> rotated_basis_vector(bool v2, bool eta) {
  if (!v2) {
    return eta ? std::pair{kSinPiOver8, -kCosPiOver8} : std::pair{kCosPiOver8, kSinPiOver8};
  }
  return eta ? std::pair{kSinPiOver8, kCosPiOver8} : std::pair{kCosPiOver8, -kSinPiOver8};
}

}  // namespace

TwoTermState TwoTermState::make(BitString a, BitString b, int phase) {
  if (a.size() != b.size()) throw ContractViolation("two-term state with unequal lengths");
  if (a == b) throw ContractViolation("two-term state needs distinct basis strings");
  if (phase != 1 && phase != -1) throw ContractViolation("phase must be +1 or -1");
  if (b < a) std::swap(a, b);
  return TwoTermState{std::move(a), std::move(b), phase};
}

QubitState QubitState::hadamard(int sign) {
  const double h = std::numbers::sqrt2 / 2;
  return QubitState{h, sign >= 0 ? h : -h};
}

bool QubitState::is_normalized(double tol) const {
  return std::abs(amp0 * amp0 + amp1 * amp1 - 1.0) <= tol;
}

double EnumeratedState::amplitude() const {
  return support.empty() ? 0.0 : 1.0 / std::sqrt(static_cast<double>(support.size()));
}

std::vector<std::pair<BitString, double>> EnumeratedState::entries() const {
  std::vector<std::pair<BitString, double>> out;
  out.reserve(support.size());
  const double a = amplitude();
  for (auto code : support) out.emplace_back(BitString::from_uint(code, n), a);
  return out;
}

nlohmann::json EnumeratedState::to_json() const {
  nlohmann::json support_json = nlohmann::json::array();
  for (auto code : support) support_json.push_back(BitString::from_uint(code, n).to_string());
  return {{"n", n}, {"amplitude", amplitude()}, {"support", std::move(support_json)}};
}

BitString measure_computational(const TwoTermState& state, Rng& rng) {
  return rng.bit() ? state.x1 : state.x0;
}

CollapseResult hadamard_collapse(const TwoTermState& state, const BitString& r, Rng& rng) {
  if (r.size() != state.n()) throw ContractViolation("challenge length differs from state length");
  const BitString delta = state.difference();
  const bool b0 = inner_product(r, state.x0);
  const bool b1 = inner_product(r, state.x1);

  BitString d = BitString::random(state.n(), rng);
  if (b0 == b1) {
    // Only outcomes with phase·(−1)^{d·Δ} = +1 survive interference. Flipping
    // a coordinate where Δ is 1 maps one coset bijectively onto the other.
    const bool wanted = state.phase < 0;
    if (inner_product(d, delta) != wanted) d.flip(delta.leading_zeros());
    return {std::move(d), QubitState::basis(b0)};
  }
  const int sign = state.phase * (inner_product(d, delta) ? -1 : 1);
  return {std::move(d), QubitState::hadamard(sign)};
}

double rotated_outcome_probability(const QubitState& q, bool v2, bool eta) {
  const auto [c0, c1] = rotated_basis_vector(v2, eta);
  const double overlap = c0 * q.amp0 + c1 * q.amp1;
  return overlap * overlap;
}

bool measure_rotated(const QubitState& q, bool v2, Rng& rng) {
  return !rng.bernoulli(rotated_outcome_probability(q, v2, false));
}

EnumeratingRegister::EnumeratingRegister(const TdpKey& key, std::size_t exhaustive_bound) {
  const std::size_t n = key.n();
  if (n > exhaustive_bound || n > 31) {
    throw ConfigurationError("enumeration needs n <= " + std::to_string(exhaustive_bound) +
                             ", key has n = " + std::to_string(n));
  }
  const std::size_t size = std::size_t{1} << n;
  state_.n = n;
  state_.support.resize(size);
  images_.reserve(size);
  for (std::size_t x = 0; x < size; ++x) {
    state_.support[x] = static_cast<std::uint32_t>(x);
    images_.push_back(eval(key, BitString::from_uint(x, n)));
  }
}

std::size_t EnumeratingRegister::count_ones(const BitString& h) const {
  return static_cast<std::size_t>(std::count_if(
      state_.support.begin(), state_.support.end(),
      [&](std::uint32_t x) { return inner_product(h, images_[x]); }));
}

void EnumeratingRegister::keep(const BitString& h, bool c) {
  std::erase_if(state_.support,
                [&](std::uint32_t x) { return inner_product(h, images_[x]) != c; });
}

bool EnumeratingRegister::measure_hash(const BitString& h, Rng& rng) {
  if (h.size() != state_.n) throw ContractViolation("hash query length differs from register");
  const std::size_t ones = count_ones(h);
  const bool c = rng.below(state_.support.size()) < ones;
  keep(h, c);
  return c;
}

void EnumeratingRegister::postselect(const BitString& h, bool c) {
  if (h.size() != state_.n) throw ContractViolation("hash query length differs from register");
  keep(h, c);
  if (state_.support.empty()) throw ContractViolation("post-selected onto an empty branch");
}

TwoTermState EnumeratingRegister::two_term_state() const {
  if (state_.support.size() != 2) {
    throw ContractViolation("register holds " + std::to_string(state_.support.size()) +
                            " strings, expected 2");
  }
  return TwoTermState::make(BitString::from_uint(state_.support[0], state_.n),
                            BitString::from_uint(state_.support[1], state_.n));
}

BruteForceSession brute_force_session(const TdpKey& key, const HashQuerySet& queries, Rng& rng,
                                      std::optional<std::span<const std::uint8_t>> forced) {
  if (queries.n() != key.n()) throw ContractViolation("query set and key disagree on n");
  if (forced && forced->size() != queries.rounds()) {
    throw ContractViolation("forced answer count does not match the number of rounds");
  }
  EnumeratingRegister reg(key);
  BruteForceSession out;
  out.trajectory.push_back(reg.state());
  for (std::size_t j = 1; j <= queries.rounds(); ++j) {
    const BitString& h = queries.query(j);
    bool c;
    if (forced) {
      c = (*forced)[j - 1] != 0;
      reg.postselect(h, c);
    } else {
      c = reg.measure_hash(h, rng);
    }
    out.answers.push_back(c ? 1 : 0);
    out.trajectory.push_back(reg.state());
  }
  return out;
}

}  // namespace qproof
