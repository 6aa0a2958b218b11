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

#include "qproof/glevin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qproof/errors.hpp"

namespace qproof {
namespace {

constexpr std::size_t kMaxSeeds = 20;

// In-place Walsh-Hadamard transform: out[σ] = Σ_J in[J]·(−1)^{|σ∧J|}.
void walsh_hadamard(std::vector<std::int32_t>& v) {
  for (std::size_t len = 1; len < v.size(); len <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += len << 1) {
      for (std::size_t k = i; k < i + len; ++k) {
        const std::int32_t a = v[k];
        const std::int32_t b = v[k + len];
        v[k] = a + b;
        v[k + len] = a - b;
      }
    }
  }
}

}  // namespace

AlgorithmBTrace algorithm_B_trace(const Prover& prover, const BitString& r, Rng& rng) {
  AlgorithmBTrace trace;
  try {
    auto after_d = prover.clone();
    auto replies = after_d->on_message(Challenge1Message{1, r});
    const auto* eq = replies.size() == 1 ? std::get_if<EquationMessage>(&replies[0]) : nullptr;
    if (eq == nullptr) throw ProtocolError("no equation response");
    trace.d = eq->d;

    // Both continuations start from the same post-d state.
    auto branch0 = after_d->clone();
    auto r0 = branch0->on_message(Challenge2Message{0});
    auto r1 = after_d->on_message(Challenge2Message{1});
    const auto* b0 = r0.size() == 1 ? std::get_if<BasisMessage>(&r0[0]) : nullptr;
    const auto* b1 = r1.size() == 1 ? std::get_if<BasisMessage>(&r1[0]) : nullptr;
    if (b0 == nullptr || b1 == nullptr || b0->eta > 1 || b1->eta > 1) {
      throw ProtocolError("no basis response");
    }
    trace.eta0 = b0->eta;
    trace.eta1 = b1->eta;
    trace.output = (trace.eta0 ^ trace.eta1) != 0;
  } catch (const ProtocolError&) {
    trace.well_formed = false;
    trace.output = rng.bit();
  }
  return trace;
}

bool algorithm_B(const Prover& prover, const BitString& r, Rng& rng) {
  return algorithm_B_trace(prover, r, rng).output;
}

GlParameters gl_parameters(std::size_t n, double epsilon, double delta) {
  if (n < 1) throw ConfigurationError("extraction needs n >= 1");
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ConfigurationError("epsilon must lie in (0, 1/2]");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigurationError("delta must lie in (0, 1)");
  GlParameters p;
  const double m = std::ceil(std::log2(static_cast<double>(n) / (delta * epsilon * epsilon)));
  p.seeds = static_cast<std::size_t>(std::max(1.0, m));
  if (p.seeds > kMaxSeeds) {
    throw ConfigurationError("extraction would need 2^" + std::to_string(p.seeds) +
                             " guesses; raise epsilon or delta");
  }
  p.verification = static_cast<std::size_t>(std::ceil(
      8.0 * (static_cast<double>(p.seeds) * std::log(2.0) + std::log(1.0 / delta)) /
      (epsilon * epsilon)));
  p.threshold = 0.5 + epsilon / 2;
  return p;
}

std::vector<GlCandidate> gl_extract(const Predictor& predictor, std::size_t n, double epsilon,
                                    double delta, Rng& rng) {
  const GlParameters params = gl_parameters(n, epsilon, delta);
  const std::size_t guesses = std::size_t{1} << params.seeds;

  std::vector<BitString> seeds;
  for (std::size_t l = 0; l < params.seeds; ++l) seeds.push_back(BitString::random(n, rng));

  // Subset sums r_J = ⊕_{l∈J} s_l; pairwise independent over J ≠ 0.
  std::vector<BitString> sums(guesses, BitString(n));
  for (std::size_t J = 1; J < guesses; ++J) {
    sums[J] = sums[J & (J - 1)] ^ seeds[static_cast<std::size_t>(std::countr_zero(J))];
  }

  std::vector<BitString> candidates(guesses, BitString(n));
  std::vector<std::int32_t> votes(guesses);
  for (std::size_t i = 0; i < n; ++i) {
    votes[0] = 0;
    for (std::size_t J = 1; J < guesses; ++J) {
      BitString q = sums[J];
      q.flip(i);
      votes[J] = predictor(q) ? -1 : 1;
    }
    walsh_hadamard(votes);
    for (std::size_t sigma = 0; sigma < guesses; ++sigma) {
      if (votes[sigma] < 0) candidates[sigma].set(i, true);
    }
  }

  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<BitString> samples;
  std::vector<bool> answers;
  samples.reserve(params.verification);
  for (std::size_t k = 0; k < params.verification; ++k) {
    samples.push_back(BitString::random(n, rng));
    answers.push_back(predictor(samples.back()));
  }

  std::vector<GlCandidate> accepted;
  for (auto& z : candidates) {
    std::size_t agree = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      agree += inner_product(samples[k], z) == answers[k];
    }
    const double score = static_cast<double>(agree) / static_cast<double>(samples.size());
    if (score >= params.threshold) accepted.push_back({std::move(z), score});
  }
  std::stable_sort(accepted.begin(), accepted.end(),
                   [](const GlCandidate& a, const GlCandidate& b) { return a.score > b.score; });
  return accepted;
}

ExtractionResult algorithm_C(const std::function<std::unique_ptr<Prover>(Rng)>& prover_factory,
                             const SharedKeyPair& keypair, Rng& rng,
                             const AlgorithmCConfig& config) {
  const std::size_t n = keypair.key->n();
  ExtractionResult result;
  result.z = BitString(n);

  // (1) RSP phase; the prover's state afterwards is ST_A.
  auto prover = prover_factory(Rng(rng.next()));
  prover->set_rsp_only(true);
  AliceSession alice(keypair, rng);
  const SessionRun run = run_local(alice, *prover);
  if (run.status != SessionStatus::Complete) throw ProtocolError(run.void_reason);
  prover->set_rsp_only(false);
  result.alice_pair = *alice.output();
  const Prover& state = *prover;

  // (2) A v1 = 0 answer from a copy, with a fresh r.
  std::optional<BitString> x_prime;
  try {
    auto copy = state.clone();
    auto replies = copy->on_message(Challenge1Message{0, BitString::random(n, rng)});
    if (replies.size() == 1) {
      if (const auto* p = std::get_if<PreimageMessage>(&replies[0]); p && p->x.size() == n) {
        x_prime = p->x;
      }
    }
  } catch (const ProtocolError&) {
  }

  // (3) List-decode x0 ⊕ x1 from the rewinding predictor.
  Rng b_rng(rng.next());
  const Predictor predictor = [&](const BitString& r) { return algorithm_B(state, r, b_rng); };
  auto candidates = gl_extract(predictor, n, config.epsilon, config.delta, rng);
  // Alice's strings always differ, so z = 0 cannot be the difference.
  std::erase_if(candidates, [](const GlCandidate& c) { return c.z.is_zero(); });
  result.candidates = candidates.size();

  // (4) Output {x′, x′ ⊕ z}.
  if (!candidates.empty()) {
    result.z = candidates.front().z;
    if (x_prime) result.pair = make_pair_ordered(*x_prime, *x_prime ^ result.z);
  }
  result.success = result.pair.has_value() && *result.pair == result.alice_pair;
  return result;
}

}  // namespace qproof
