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

#include <gtest/gtest.h>

#include "qproof/errors.hpp"
#include "qproof/poq.hpp"

using namespace qproof;

namespace {

BitString B(const char* s) { return BitString::from_string(s); }

SharedKeyPair modular_pair(std::size_t bits, std::uint64_t seed) {
  Rng rng(seed);
  return SharedKeyPair::from(gen(ModularConfig{bits}, rng));
}

// Answers the hashing phase honestly and then sends a fixed message.
class BadAfterHashing final : public Prover {
 public:
  explicit BadAfterHashing(Message reply) : Prover(Rng(0)), reply_(std::move(reply)) {}
  std::unique_ptr<Prover> clone() const override { return std::make_unique<BadAfterHashing>(*this); }
  std::string_view name() const override { return "bad"; }
  std::vector<Message> on_message(const Message& m) override {
    if (hashing_complete() && std::holds_alternative<Challenge1Message>(m)) return {reply_};
    return Prover::on_message(m);
  }

 protected:
  bool answer_query(const BitString&) override { return false; }
  BitString respond_preimage(const BitString&) override { return {}; }
  BitString respond_equation(const BitString&) override { return {}; }
  bool respond_basis(bool) override { return false; }

 private:
  Message reply_;
};

}  // namespace

TEST(AcceptPredicate, examples) {
  // Equal branch: r·x0 = r·x1 = 0 accepts η = 0 for any d, v2.
  for (const char* d : {"00", "01", "10", "11"}) {
    for (std::uint8_t v2 : {0, 1}) {
      EXPECT_TRUE(accept_predicate(B("00"), B("11"), B("11"), true, EquationPayload{B(d), v2, 0}));
      EXPECT_FALSE(accept_predicate(B("00"), B("11"), B("11"), true, EquationPayload{B(d), v2, 1}));
    }
  }
  EXPECT_TRUE(accept_predicate(B("01"), B("10"), B("01"), true, EquationPayload{B("11"), 1, 1}));
  EXPECT_FALSE(accept_predicate(B("01"), B("10"), B("01"), true, EquationPayload{B("11"), 1, 0}));
  EXPECT_TRUE(accept_predicate(B("01"), B("10"), B("01"), true, EquationPayload{B("10"), 1, 0}));
}

TEST(AcceptPredicate, preimage_branch) {
  EXPECT_TRUE(accept_predicate(B("01"), B("10"), B("11"), false, PreimagePayload{B("01")}));
  EXPECT_TRUE(accept_predicate(B("01"), B("10"), B("11"), false, PreimagePayload{B("10")}));
  EXPECT_FALSE(accept_predicate(B("01"), B("10"), B("11"), false, PreimagePayload{B("11")}));
  EXPECT_FALSE(accept_predicate(B("01"), B("10"), B("11"), false, PreimagePayload{B("011")}));
}

TEST(AcceptPredicate, mismatched_payloads_reject) {
  EXPECT_FALSE(accept_predicate(B("01"), B("10"), B("11"), true, PreimagePayload{B("01")}));
  EXPECT_FALSE(accept_predicate(B("01"), B("10"), B("11"), false, EquationPayload{B("00"), 0, 0}));
  EXPECT_FALSE(accept_predicate(B("01"), B("10"), B("11"), true, EquationPayload{B("0"), 0, 0}));
}

TEST(AcceptPredicate, total_and_deterministic_under_fuzzing) {
  Rng rng(1);
  for (int i = 0; i < 200000; ++i) {
    const std::size_t n = 1 + rng.below(12);
    const BitString x0 = BitString::random(n, rng);
    const BitString x1 = BitString::random(n, rng);
    const BitString r = BitString::random(rng.below(8) == 0 ? 1 + rng.below(12) : n, rng);
    const bool v1 = rng.bit();
    BranchPayload payload;
    if (rng.bit()) {
      payload = PreimagePayload{BitString::random(rng.below(8) == 0 ? 1 + rng.below(12) : n, rng)};
    } else {
      payload = EquationPayload{BitString::random(rng.below(8) == 0 ? 1 + rng.below(12) : n, rng),
                                static_cast<std::uint8_t>(rng.bit()),
                                static_cast<std::uint8_t>(rng.bit())};
    }
    bool first = false;
    ASSERT_NO_THROW(first = accept_predicate(x0, x1, r, v1, payload));
    ASSERT_EQ(first, accept_predicate(x0, x1, r, v1, payload));
    // Reference: the honest answer for the equation branch.
    if (const auto* e = std::get_if<EquationPayload>(&payload);
        e && v1 && e->d.size() == n && r.size() == n) {
      bool rx0 = false, rx1 = false, dd = false;
      for (std::size_t k = 0; k < n; ++k) {
        rx0 ^= r[k] && x0[k];
        rx1 ^= r[k] && x1[k];
        dd ^= e->d[k] && (x0[k] != x1[k]);
      }
      const bool ideal = rx0 == rx1 ? rx0 : ((e->v2 != 0) != dd);
      ASSERT_EQ(first, (e->eta != 0) == ideal);
    }
  }
}

TEST(Verifier, message_sequence_and_r_sent_on_both_branches) {
  const auto kp = modular_pair(17, 2);
  bool seen[2] = {};
  for (std::uint64_t i = 0; i < 40; ++i) {
    QuantumProver prover(BobMode::Escrow, kp.trapdoor, prover_stream(7, i));
    const auto res = run_poq_session(kp, prover, verifier_stream(7, i), true);
    ASSERT_EQ(res.status, SessionStatus::Complete);
    const auto& msgs = res.messages;
    // key, 15 query/answer pairs, challenge1, response, [challenge2, basis], verdict
    const std::size_t expected = res.transcript.v1 == 0 ? 1 + 30 + 3 : 1 + 30 + 5;
    ASSERT_EQ(msgs.size(), expected);
    const auto* c1 = std::get_if<Challenge1Message>(&msgs[31].message);
    ASSERT_NE(c1, nullptr);
    EXPECT_EQ(c1->r.size(), 16u);
    EXPECT_EQ(c1->r, res.transcript.r);
    seen[c1->v1] = true;
    EXPECT_TRUE(std::holds_alternative<VerdictMessage>(msgs.back().message));
    EXPECT_EQ(msgs.back().from, Role::Verifier);
    EXPECT_EQ(std::get<VerdictMessage>(msgs.back().message).accept, *res.verdict);
    EXPECT_EQ(*prover.verdict(), *res.verdict);
  }
  EXPECT_TRUE(seen[0] && seen[1]);
}

TEST(Verifier, malformed_prover_voids_the_session) {
  const auto kp = modular_pair(12, 3);
  for (const Message& reply : {Message(BasisMessage{0}), Message(PreimageMessage{B("101")}),
                               Message(EquationMessage{B("1")})}) {
    for (std::uint64_t i = 0; i < 8; ++i) {
      BadAfterHashing prover(reply);
      const auto res = run_poq_session(kp, prover, verifier_stream(1, i));
      EXPECT_EQ(res.status, SessionStatus::Void);
      EXPECT_FALSE(res.verdict.has_value());
    }
  }
}

TEST(Prover, rejects_out_of_order_challenges) {
  const auto kp = modular_pair(10, 4);
  ClassicalOptimalProver p(Rng(5));
  p.on_message(KeyMessage{kp.key});
  EXPECT_THROW(p.on_message(Challenge2Message{0}), ProtocolError);
}

TEST(Prover, clones_replay_identically) {
  const auto kp = modular_pair(20, 6);
  Rng rng(7);
  for (auto strategy : {Strategy::Quantum, Strategy::ClassicalOptimal, Strategy::ClassicalBaseline,
                        Strategy::ClassicalRandom, Strategy::Leaky}) {
    auto prover = make_prover(ProverConfig{strategy, BobMode::Escrow, kp.trapdoor}, Rng(8));
    prover->set_rsp_only(false);
    AliceSession alice(kp, rng);
    prover->set_rsp_only(true);
    ASSERT_EQ(run_local(alice, *prover).status, SessionStatus::Complete);
    prover->set_rsp_only(false);
    const BitString r = BitString::random(19, rng);
    auto a = prover->clone();
    auto b = prover->clone();
    const auto ra = a->on_message(Challenge1Message{1, r});
    const auto rb = b->on_message(Challenge1Message{1, r});
    EXPECT_EQ(ra, rb) << strategy_name(strategy);
    EXPECT_EQ(a->on_message(Challenge2Message{1}), b->on_message(Challenge2Message{1}));
  }
}

TEST(Strategy, names_round_trip) {
  for (auto s : {Strategy::Quantum, Strategy::ClassicalOptimal, Strategy::ClassicalBaseline,
                 Strategy::ClassicalRandom, Strategy::Leaky}) {
    EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  }
  EXPECT_FALSE(parse_strategy("psychic").has_value());
  EXPECT_THROW(make_prover(ProverConfig{Strategy::Leaky, BobMode::Escrow, nullptr}, Rng(0)),
               ConfigurationError);
  EXPECT_THROW(make_prover(ProverConfig{Strategy::Quantum, BobMode::Escrow, nullptr}, Rng(0)),
               ConfigurationError);
}

TEST(Bench, honest_prover_rates) {
  BenchConfig cfg;
  cfg.trials = 20000;
  cfg.seed = 11;
  cfg.key_config = ModularConfig{21};
  const BenchStats s = bench(cfg);
  EXPECT_EQ(s.void_sessions, 0u);
  EXPECT_EQ(s.v1_0.accepted, s.v1_0.trials);
  // Five standard deviations at these counts.
  EXPECT_NEAR(s.v1_1_v2_0.estimate(), kCos2PiOver8, 0.025);
  EXPECT_NEAR(s.v1_1_v2_1.estimate(), kCos2PiOver8, 0.025);
  EXPECT_NEAR(s.overall().estimate(), kHonestAcceptance, 0.01);
}

TEST(Bench, classical_strategy_rates) {
  BenchConfig cfg;
  cfg.trials = 20000;
  cfg.seed = 12;
  cfg.key_config = ModularConfig{21};
  cfg.strategy = Strategy::ClassicalOptimal;
  const BenchStats opt = bench(cfg);
  EXPECT_EQ(opt.v1_0.accepted, opt.v1_0.trials);
  EXPECT_NEAR(opt.v1_1().estimate(), 0.75, 0.02);
  EXPECT_NEAR(opt.overall().estimate(), 0.875, 0.012);

  cfg.strategy = Strategy::ClassicalBaseline;
  const BenchStats base = bench(cfg);
  EXPECT_EQ(base.v1_0.accepted, base.v1_0.trials);
  EXPECT_NEAR(base.v1_1().estimate(), 0.5, 0.02);

  cfg.strategy = Strategy::ClassicalRandom;
  const BenchStats rnd = bench(cfg);
  EXPECT_LT(rnd.v1_0.estimate(), 0.001);
  EXPECT_NEAR(rnd.v1_1().estimate(), 0.5, 0.02);

  cfg.strategy = Strategy::Leaky;
  cfg.trials = 2000;
  const BenchStats leaky = bench(cfg);
  EXPECT_EQ(leaky.overall().accepted, leaky.overall().trials);
}

TEST(Bench, enumerate_mode_matches_escrow_rates) {
  BenchConfig cfg;
  cfg.trials = 6000;
  cfg.seed = 13;
  cfg.key_config = MockTableConfig{8};
  cfg.mode = BobMode::Enumerate;
  const BenchStats s = bench(cfg);
  EXPECT_EQ(s.v1_0.accepted, s.v1_0.trials);
  EXPECT_NEAR(s.overall().estimate(), kHonestAcceptance, 0.02);
}

TEST(Bench, deterministic_across_thread_counts) {
  BenchConfig cfg;
  cfg.trials = 3001;
  cfg.seed = 14;
  cfg.key_config = ModularConfig{16};
  cfg.record_verdicts = true;
  const BenchStats one = bench(cfg);
  cfg.threads = 4;
  const BenchStats four = bench(cfg);
  EXPECT_EQ(one.to_json(), four.to_json());
  EXPECT_EQ(one.verdicts, four.verdicts);
  cfg.fresh_key_per_session = true;
  cfg.trials = 300;
  const BenchStats fresh4 = bench(cfg);
  cfg.threads = 1;
  EXPECT_EQ(bench(cfg).to_json(), fresh4.to_json());
}

TEST(Bench, zero_trials_is_an_error) {
  BenchConfig cfg;
  cfg.trials = 0;
  EXPECT_THROW(bench(cfg), ConfigurationError);
}

TEST(BenchStats, branch_identity_and_json) {
  BenchStats s;
  s.strategy = "x";
  s.trials = 10;
  s.v1_0 = {4, 4};
  s.v1_1_v2_0 = {3, 2};
  s.v1_1_v2_1 = {3, 1};
  EXPECT_EQ(s.v1_1().trials, 6u);
  EXPECT_EQ(s.v1_1().accepted, 3u);
  EXPECT_DOUBLE_EQ(s.v1_1().estimate(),
                   (s.v1_1_v2_0.estimate() * 3 + s.v1_1_v2_1.estimate() * 3) / 6);
  EXPECT_EQ(s.overall().accepted, 7u);
  const auto j = s.to_json();
  EXPECT_EQ(j["schema"], kStatsSchema);
  for (const char* k : {"p0", "p1", "p10", "p11", "overall"}) {
    ASSERT_TRUE(j.contains(k));
    EXPECT_TRUE(j[k].contains("ci95"));
  }
  EXPECT_NE(s.to_table().find("overall"), std::string::npos);
}

TEST(BranchTally, wilson_reference_values) {
  // Reference values from an independent implementation.
  struct Case {
    std::uint64_t accepted, trials;
    double lo, hi;
  } cases[] = {{50, 100, 0.403831530366, 0.596168469634},
               {0, 10, 0.0, 0.277532799863},
               {9994, 9994, 0.999615771181, 1.0},
               {18496, 20000, 0.921063044220, 0.928373801947},
               {1, 3, 0.061491944720, 0.792340399198}};
  for (const auto& c : cases) {
    const auto ci = BranchTally{c.trials, c.accepted}.wilson();
    EXPECT_NEAR(ci.lo, c.lo, 1e-9);
    EXPECT_NEAR(ci.hi, c.hi, 1e-9);
  }
}

TEST(Constants, honest_acceptance) {
  EXPECT_NEAR(kHonestAcceptance, 0.5 + (2 + std::sqrt(2.0)) / 8, 1e-16);
  EXPECT_NEAR(kHonestAcceptance, 0.9267766952966369, 1e-15);
  EXPECT_GT(kHonestAcceptance - kClassicalAcceptance, 0.05);
}
