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

#include "qproof/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <set>
#include <sstream>

#include "qproof/bits.hpp"
#include "qproof/glevin.hpp"
#include "qproof/message.hpp"
#include "qproof/poq.hpp"
#include "qproof/qsim.hpp"
#include "qproof/rsp.hpp"
#include "qproof/tdp.hpp"

namespace qproof {
namespace {

// Frame of HashAnswer{j:1, c:1}; must never change.
constexpr std::string_view kGoldenAnswerFrame =
    std::string_view("\x00\x00\x00\x22{\"c\":1,\"j\":1,\"type\":\"hash_answer\"}", 38);

std::string check_solver(Rng& rng) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const HashQuerySet qs = sample_hash_queries(n, rng);
      std::vector<std::uint8_t> c(n - 1);
      for (auto& b : c) b = rng.bit();
      std::vector<BitString> brute;
      for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
        const BitString ys = BitString::from_uint(y, n);
        bool ok = true;
        for (std::size_t j = 1; j < n && ok; ++j) ok = inner_product(qs.query(j), ys) == (c[j - 1] != 0);
        if (ok) brute.push_back(ys);
      }
      const SolutionPair sp = solve_two_solutions(qs, c);
      if (brute.size() != 2 || brute[0] != sp.y0 || brute[1] != sp.y1) {
        return "mismatch at n = " + std::to_string(n);
      }
    }
  }
  return {};
}

std::string check_tdp(Rng& rng) {
  const TdpKeyPair mock = gen(MockTableConfig{10}, rng);
  for (std::uint64_t x = 0; x < 1024; ++x) {
    const BitString xs = BitString::from_uint(x, 10);
    if (invert(mock.trapdoor, eval(mock.key, xs)) != xs) return "mock round trip failed";
  }
  const TdpKeyPair small = gen(ExplicitModulusConfig{21, 5}, rng);
  std::set<std::uint64_t> image;
  for (std::uint64_t x = 0; x < 16; ++x) image.insert(eval(small.key, BitString::from_uint(x, 4)).to_uint());
  if (image.size() != 16) return "N = 21 walk is not a bijection";
  const TdpKeyPair big = gen(ModularConfig{64}, rng);
  for (int i = 0; i < 500; ++i) {
    const BitString x = BitString::random(big.key.n(), rng);
    if (invert(big.trapdoor, eval(big.key, x)) != x) return "64-bit round trip failed";
  }
  return {};
}

std::string check_collapse(Rng& rng) {
  const auto state = TwoTermState::make(BitString::from_string("0110"), BitString::from_string("1011"));
  const BitString delta = state.difference();
  const BitString r = BitString::from_string("0010");  // r·x0 = r·x1
  for (int i = 0; i < 1000; ++i) {
    if (inner_product(hadamard_collapse(state, r, rng).d, delta)) return "d outside the coset";
  }
  return {};
}

std::string check_rsp(Rng& rng) {
  const SharedKeyPair mock = SharedKeyPair::from(gen(MockTableConfig{8}, rng));
  const SharedKeyPair modular = SharedKeyPair::from(gen(ModularConfig{13}, rng));
  for (const auto* kp : {&mock, &modular}) {
    for (auto mode : {BobMode::Escrow, BobMode::Enumerate}) {
      for (int i = 0; i < 100; ++i) {
        AliceSession alice(*kp, rng);
        HonestBob bob(mode, kp->trapdoor, Rng(rng.next()));
        if (run_local(alice, bob).status != SessionStatus::Complete) return "void session";
        if (!rsp_outcome_consistent(alice.transcript(), {*alice.output(), bob.state()})) {
          return "outcome invariant violated";
        }
      }
    }
  }
  return {};
}

std::string check_acceptance(std::uint64_t seed) {
  BenchConfig config;
  config.trials = 20000;
  config.seed = seed;
  config.key_config = ModularConfig{17};
  const BenchStats honest = bench(config);
  config.strategy = Strategy::ClassicalOptimal;
  const BenchStats classical = bench(config);
  std::ostringstream out;
  out << "honest " << honest.overall().estimate() << ", classical " << classical.overall().estimate();
  if (honest.v1_0.accepted != honest.v1_0.trials) return "honest v1 = 0 branch rejected; " + out.str();
  if (std::abs(honest.overall().estimate() - kHonestAcceptance) > 0.015) return out.str();
  if (std::abs(classical.overall().estimate() - kClassicalAcceptance) > 0.015) return out.str();
  return {};
}

std::string check_extractor(Rng& rng) {
  const BitString s = BitString::random(16, rng);
  const auto candidates =
      gl_extract([&](const BitString& r) { return inner_product(r, s); }, 16, 0.5, 0.01, rng);
  if (candidates.empty() || candidates.front().z != s) return "perfect predictor not decoded";

  const SharedKeyPair kp = SharedKeyPair::from(gen(ModularConfig{17}, rng));
  const auto result = algorithm_C(
      [&](Rng tape) { return std::make_unique<LeakyProver>(kp.trapdoor, std::move(tape)); }, kp, rng);
  if (!result.success) return "leaky prover pair not recovered";
  return {};
}

std::string check_frame() {
  const auto frame = encode(HashAnswerMessage{1, 1});
  const std::string_view bytes(reinterpret_cast<const char*>(frame.data()), frame.size());
  if (bytes != kGoldenAnswerFrame) return "golden frame changed";
  if (!(decode(frame) == Message(HashAnswerMessage{1, 1}))) return "golden frame does not decode";
  return {};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::pair<std::string, std::function<std::string()>>> checks = {
      {"solver-vs-brute-force", [&] { return check_solver(rng); }},
      {"permutation-round-trips", [&] { return check_tdp(rng); }},
      {"hadamard-collapse-coset", [&] { return check_collapse(rng); }},
      {"rsp-perfect-correctness", [&] { return check_rsp(rng); }},
      {"acceptance-rates", [&] { return check_acceptance(seed); }},
      {"goldreich-levin-extraction", [&] { return check_extractor(rng); }},
      {"golden-frame", [] { return check_frame(); }},
  };
  std::vector<SelftestCheck> results;
  for (const auto& [name, fn] : checks) {
    SelftestCheck c{name, false, {}};
    try {
      c.detail = fn();
      c.passed = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    results.push_back(std::move(c));
  }
  return results;
}

}  // namespace qproof
