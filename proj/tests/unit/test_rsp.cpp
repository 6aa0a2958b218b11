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

#include "../support/oracles.hpp"
#include "qproof/errors.hpp"
#include "qproof/rsp.hpp"

using namespace qproof;
using qproof::testing::brute_force_preimage;
using qproof::testing::chi_square_uniform_p;

namespace {

BitString B(const char* s) { return BitString::from_string(s); }

// Answers from a fixed list; used to drive Alice through a chosen transcript.
class ScriptedResponder : public HashingResponder {
 public:
  explicit ScriptedResponder(std::vector<std::uint8_t> script) : script_(std::move(script)) {}
  bool finished() const override { return hashing_complete(); }

 protected:
  bool answer_query(const BitString&) override { return script_.at(answers_.size()) != 0; }

 private:
  std::vector<std::uint8_t> script_;
};

// Party that replies to every message with a fixed one.
class FixedReply : public Party {
 public:
  explicit FixedReply(Message m) : m_(std::move(m)) {}
  std::vector<Message> on_message(const Message& in) override {
    if (std::holds_alternative<KeyMessage>(in)) return {};
    return {m_};
  }
  bool finished() const override { return false; }

 private:
  Message m_;
};

SharedKeyPair identity_pair(std::size_t n) {
  Rng rng(0);
  return SharedKeyPair::from(gen(MockTableConfig{n, true}, rng));
}

}  // namespace

TEST(Alice, single_bit_domain_has_no_rounds) {
  Rng rng(1);
  const auto kp = SharedKeyPair::from(mock_from_table({1, 0}));
  AliceSession alice(kp, rng);
  HonestBob bob(BobMode::Enumerate, nullptr, Rng(2));
  const SessionRun run = run_local(alice, bob, true);
  ASSERT_EQ(run.status, SessionStatus::Complete);
  ASSERT_EQ(run.transcript.size(), 1u);
  EXPECT_EQ(*alice.output(), (StringPair{B("0"), B("1")}));
  EXPECT_EQ(*bob.state(), TwoTermState::make(B("0"), B("1")));
}

TEST(Alice, scripted_transcript_example) {
  // Drive Alice with h = [110, 011] and c = (1, 0) on the identity table.
  const auto kp = identity_pair(3);
  for (std::uint64_t seed = 0;; ++seed) {
    Rng rng(seed);
    AliceSession alice(kp, rng);
    if (alice.transcript().queries != std::vector<BitString>{B("110"), B("011")}) continue;
    ScriptedResponder bob({1, 0});
    ASSERT_EQ(run_local(alice, bob).status, SessionStatus::Complete);
    EXPECT_EQ(*alice.output(), (StringPair{B("011"), B("100")}));
    break;
  }
}

TEST(Alice, output_is_a_pure_function_of_the_transcript) {
  Rng rng(3);
  const auto kp = SharedKeyPair::from(gen(ModularConfig{20}, rng));
  for (int i = 0; i < 100; ++i) {
    AliceSession alice(kp, rng);
    HonestBob bob(BobMode::Escrow, kp.trapdoor, Rng(rng.next()));
    ASSERT_EQ(run_local(alice, bob).status, SessionStatus::Complete);
    const auto replayed = RspTranscript::from_json(
        nlohmann::json::parse(alice.transcript().to_json().dump()));
    EXPECT_EQ(alice_output(*kp.trapdoor, replayed), *alice.output());
    EXPECT_EQ(bob.transcript().answers, alice.transcript().answers);
  }
}

TEST(Alice, malformed_answers_void_the_session) {
  const auto kp = identity_pair(4);
  {
    Rng rng(4);
    AliceSession alice(kp, rng);
    FixedReply bad(HashAnswerMessage{1, 2});
    const auto run = run_local(alice, bad);
    EXPECT_EQ(run.status, SessionStatus::Void);
    EXPECT_NE(run.void_reason.find("not a bit"), std::string::npos);
  }
  {
    Rng rng(5);
    AliceSession alice(kp, rng);
    FixedReply bad(HashAnswerMessage{2, 0});
    EXPECT_EQ(run_local(alice, bad).status, SessionStatus::Void);
  }
  {
    Rng rng(6);
    AliceSession alice(kp, rng);
    FixedReply bad(BasisMessage{0});
    EXPECT_EQ(run_local(alice, bad).status, SessionStatus::Void);
  }
}

TEST(HashingResponder, rejects_bad_queries) {
  HonestBob bob(BobMode::Enumerate, nullptr, Rng(7));
  EXPECT_THROW(bob.on_message(HashQueryMessage{1, B("100")}), ProtocolError);  // no key yet
  const auto kp = identity_pair(3);
  bob.on_message(KeyMessage{kp.key});
  EXPECT_THROW(bob.on_message(HashQueryMessage{1, B("010")}), ProtocolError);  // prefix
  EXPECT_THROW(bob.on_message(HashQueryMessage{2, B("010")}), ProtocolError);  // round
  EXPECT_THROW(bob.on_message(HashQueryMessage{1, B("10")}), ProtocolError);   // length
  EXPECT_EQ(bob.on_message(HashQueryMessage{1, B("101")}).size(), 1u);
}

TEST(HonestBob, escrow_mode_needs_a_matching_trapdoor) {
  const auto kp = identity_pair(4);
  HonestBob no_escrow(BobMode::Escrow, nullptr, Rng(8));
  EXPECT_THROW(no_escrow.on_message(KeyMessage{kp.key}), ConfigurationError);

  Rng rng(9);
  const auto other = SharedKeyPair::from(gen(MockTableConfig{4}, rng));
  const auto shifted = SharedKeyPair::from(mock_from_table(
      {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 0}));
  HonestBob wrong(BobMode::Escrow, shifted.trapdoor, Rng(10));
  EXPECT_THROW(wrong.on_message(KeyMessage{kp.key}), ConfigurationError);
  (void)other;
}

TEST(HonestBob, enumerate_mode_refuses_large_keys) {
  Rng rng(11);
  const auto kp = SharedKeyPair::from(gen(ModularConfig{33}, rng));
  HonestBob bob(BobMode::Enumerate, nullptr, Rng(12));
  EXPECT_THROW(bob.on_message(KeyMessage{kp.key}), ConfigurationError);
}

TEST(Rsp, perfect_correctness_across_keys_and_modes) {
  Rng rng(13);
  const SharedKeyPair pairs[] = {
      SharedKeyPair::from(gen(MockTableConfig{8, true}, rng)),
      SharedKeyPair::from(gen(MockTableConfig{8}, rng)),
      SharedKeyPair::from(gen(ModularConfig{12}, rng)),
  };
  for (const auto& kp : pairs) {
    for (auto mode : {BobMode::Escrow, BobMode::Enumerate}) {
      for (int i = 0; i < 300; ++i) {
        AliceSession alice(kp, rng);
        HonestBob bob(mode, kp.trapdoor, Rng(rng.next()));
        ASSERT_EQ(run_local(alice, bob).status, SessionStatus::Complete);
        const RspOutcome outcome{*alice.output(), bob.state()};
        ASSERT_TRUE(rsp_outcome_consistent(alice.transcript(), outcome));
        // Independent check by exhaustive inversion of the public key.
        const SolutionPair ys =
            solve_two_solutions(alice.transcript().query_set(), alice.transcript().answers);
        const auto expected = make_pair_ordered(brute_force_preimage(*kp.key, ys.y0),
                                                brute_force_preimage(*kp.key, ys.y1));
        EXPECT_EQ(*alice.output(), expected);
      }
    }
  }
}

TEST(Rsp, escrow_and_enumerate_answers_are_uniform) {
  Rng rng(14);
  const auto kp = SharedKeyPair::from(gen(MockTableConfig{8}, rng));
  for (auto mode : {BobMode::Escrow, BobMode::Enumerate}) {
    std::vector<std::vector<std::uint64_t>> counts(7, std::vector<std::uint64_t>(2));
    for (int i = 0; i < 2000; ++i) {
      AliceSession alice(kp, rng);
      HonestBob bob(mode, kp.trapdoor, Rng(rng.next()));
      ASSERT_EQ(run_local(alice, bob).status, SessionStatus::Complete);
      for (std::size_t j = 0; j < 7; ++j) ++counts[j][alice.transcript().answers[j]];
    }
    for (const auto& c : counts) EXPECT_GT(chi_square_uniform_p(c), 0.001);
  }
}

TEST(RspOutcome, detects_inconsistency) {
  Rng rng(15);
  const auto kp = identity_pair(5);
  AliceSession alice(kp, rng);
  HonestBob bob(BobMode::Enumerate, nullptr, Rng(16));
  ASSERT_EQ(run_local(alice, bob).status, SessionStatus::Complete);
  auto pair = *alice.output();
  EXPECT_TRUE(rsp_outcome_consistent(alice.transcript(), {pair, std::nullopt}));
  auto wrong_state = TwoTermState::make(pair.first, pair.first ^ BitString::unit(5, 0));
  if (wrong_state.x1 == pair.second) wrong_state = TwoTermState::make(pair.first, pair.second ^ BitString::unit(5, 4));
  EXPECT_FALSE(rsp_outcome_consistent(alice.transcript(), {pair, wrong_state}));
  pair.second.flip(0);
  EXPECT_FALSE(rsp_outcome_consistent(alice.transcript(), {pair, std::nullopt}));
}

TEST(BindingGame, trapdoor_holder_always_wins) {
  Rng rng(17);
  const auto kp = SharedKeyPair::from(gen(MockTableConfig{8}, rng));
  TrapdoorBindingAdversary adv(kp.trapdoor, Rng(18));
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(binding_game(kp, adv, rng), BindingResult::Win);
}

TEST(BindingGame, equal_pair_always_loses) {
  Rng rng(19);
  const auto kp = SharedKeyPair::from(gen(MockTableConfig{8}, rng));
  EqualPairBindingAdversary adv(Rng(20));
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(binding_game(kp, adv, rng), BindingResult::Lose);
}

TEST(BindingGame, one_branch_guesser_wins_at_the_guessing_rate) {
  Rng rng(21);
  const auto kp = SharedKeyPair::from(gen(MockTableConfig{8}, rng));
  OneBranchBindingAdversary adv(Rng(22));
  const int games = 100000;
  int wins = 0;
  for (int i = 0; i < games; ++i) wins += binding_game(kp, adv, rng) == BindingResult::Win;
  // Mean games / 256 = 390.6, standard deviation about 19.7.
  EXPECT_NEAR(wins, games / 256.0, 5 * 19.7);
}

TEST(BindingGame, malformed_adversary_is_flagged) {
  struct NonBit : BindingAdversary {
    void on_key(const KeyPtr&) override {}
    std::uint8_t answer(std::size_t, const BitString&) override { return 3; }
    StringPair reveal() override { return {}; }
  } nonbit;
  struct ShortReveal : BindingAdversary {
    void on_key(const KeyPtr&) override {}
    std::uint8_t answer(std::size_t, const BitString&) override { return 0; }
    StringPair reveal() override { return {BitString(2), BitString(2)}; }
  } short_reveal;
  Rng rng(23);
  const auto kp = identity_pair(4);
  EXPECT_EQ(binding_game(kp, nonbit, rng), BindingResult::ProtocolError);
  EXPECT_EQ(binding_game(kp, short_reveal, rng), BindingResult::ProtocolError);
}
