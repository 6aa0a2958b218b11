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
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qproof/bits.hpp"
#include "qproof/qsim.hpp"
#include "qproof/rng.hpp"
#include "qproof/session.hpp"
#include "qproof/tdp.hpp"

namespace qproof {

// Remote state preparation over interactive hashing. Alice (the classical
// party) sends the key and n−1 structured queries, one per round; Bob answers
// each with a bit. Afterwards Alice knows {x0, x1} = f^{-1}({y0, y1}) where
// y0, y1 are the two solutions of the answered system, and an honest Bob
// holds |x0⟩ + |x1⟩.

using KeyPtr = std::shared_ptr<const TdpKey>;
using TrapdoorPtr = std::shared_ptr<const TdpTrapdoor>;

/// Shared, immutable key pair used by the verifier side of many sessions.
struct SharedKeyPair {
  KeyPtr key;
  TrapdoorPtr trapdoor;

  static SharedKeyPair from(TdpKeyPair pair);
};

struct RspTranscript {
  KeyPtr key;
  std::vector<BitString> queries;
  std::vector<std::uint8_t> answers;

  HashQuerySet query_set() const;
  nlohmann::json to_json() const;
  static RspTranscript from_json(const nlohmann::json& j);
};

/// Unordered pair {x0, x1}, stored with x0 < x1.
using StringPair = std::pair<BitString, BitString>;

StringPair make_pair_ordered(BitString a, BitString b);

/// Alice's output as a pure function of the trapdoor and the transcript.
StringPair alice_output(const TdpTrapdoor& td, const RspTranscript& transcript);

struct RspOutcome {
  StringPair alice_pair;
  std::optional<TwoTermState> bob_state;
};

/// Checks both RspOutcome invariants: eval maps the pair onto the two
/// solutions of the transcript, and Bob's support (if any) equals the pair.
bool rsp_outcome_consistent(const RspTranscript& transcript, const RspOutcome& outcome);

/// Alice's side. All queries are sampled at construction and released one
/// per round. Alice never aborts; a malformed answer voids the session.
class AliceSession : public Party {
 public:
  AliceSession(SharedKeyPair keypair, Rng& rng);

  std::vector<Message> start() override;
  std::vector<Message> on_message(const Message& m) override;
  bool finished() const override { return output_.has_value(); }

  const std::optional<StringPair>& output() const noexcept { return output_; }
  const RspTranscript& transcript() const noexcept { return transcript_; }
  std::size_t n() const noexcept { return keypair_.key->n(); }

 private:
  void complete();

  SharedKeyPair keypair_;
  HashQuerySet queries_;
  RspTranscript transcript_;
  bool started_ = false;
  std::optional<StringPair> output_;
};

/// Prover-side bookkeeping for the hashing phase: validates the key and
/// every query, and delegates each answer to the strategy. Messages after the
/// hashing phase go to `after_hashing`.
class HashingResponder : public Party {
 public:
  std::vector<Message> on_message(const Message& m) override;

  bool has_key() const noexcept { return key_ != nullptr; }
  bool hashing_complete() const noexcept;
  const KeyPtr& key() const noexcept { return key_; }
  RspTranscript transcript() const { return RspTranscript{key_, queries_, answers_}; }

 protected:
  virtual void on_key() {}
  virtual bool answer_query(const BitString& h) = 0;
  virtual void on_hashing_complete() {}
  virtual std::vector<Message> after_hashing(const Message& m);

  KeyPtr key_;
  std::vector<BitString> queries_;
  std::vector<std::uint8_t> answers_;
};

enum class BobMode {
  /// Answers uniformly and reconstructs {x0, x1} from an escrowed trapdoor.
  Escrow,
  /// Coherent brute-force simulation; needs n <= 20.
  Enumerate,
};

/// The honest prover's n-qubit register during hashing.
///
/// In escrow mode each answer is a fair coin: every query is independent of
/// its predecessors, so it splits the current support exactly in half and the
/// Born rule gives probability 1/2. The trapdoor is consulted only once the
/// transcript is final, to name the two surviving basis strings.
class HonestRegister {
 public:
  HonestRegister(KeyPtr key, BobMode mode, TrapdoorPtr escrow);

  bool measure(const BitString& h, Rng& rng);
  TwoTermState final_state(const RspTranscript& transcript) const;

 private:
  KeyPtr key_;
  BobMode mode_;
  TrapdoorPtr escrow_;
  std::optional<EnumeratingRegister> enumerated_;
};

/// Honest Bob for a stand-alone RSP session.
class HonestBob : public HashingResponder {
 public:
  HonestBob(BobMode mode, TrapdoorPtr escrow, Rng rng);

  bool finished() const override { return state_.has_value(); }
  const std::optional<TwoTermState>& state() const noexcept { return state_; }

 protected:
  void on_key() override;
  bool answer_query(const BitString& h) override;
  void on_hashing_complete() override;

 private:
  BobMode mode_;
  TrapdoorPtr escrow_;
  Rng rng_;
  std::optional<HonestRegister> reg_;
  std::optional<TwoTermState> state_;
};

// --- binding game ------------------------------------------------------------

/// An interactive-hashing adversary: answers each query, then claims a
/// preimage of each solution.
class BindingAdversary {
 public:
  virtual ~BindingAdversary() = default;
  virtual void on_key(const KeyPtr& key) = 0;
  virtual std::uint8_t answer(std::size_t j, const BitString& h) = 0;
  virtual StringPair reveal() = 0;
};

enum class BindingResult { Win, Lose, ProtocolError };

/// The challenger: wins iff {eval(α), eval(β)} = {y0, y1}. Non-bit answers or
/// wrong-length claims are reported as ProtocolError.
BindingResult binding_game(const SharedKeyPair& keypair, BindingAdversary& adversary, Rng& rng);

/// Holds the trapdoor; always wins.
class TrapdoorBindingAdversary : public BindingAdversary {
 public:
  TrapdoorBindingAdversary(TrapdoorPtr td, Rng rng) : td_(std::move(td)), rng_(std::move(rng)) {}
  void on_key(const KeyPtr& key) override;
  std::uint8_t answer(std::size_t j, const BitString& h) override;
  StringPair reveal() override;

 private:
  TrapdoorPtr td_;
  Rng rng_;
  KeyPtr key_;
  std::vector<BitString> queries_;
  std::vector<std::uint8_t> answers_;
};

/// Commits honestly to one preimage x and guesses the other uniformly.
class OneBranchBindingAdversary : public BindingAdversary {
 public:
  explicit OneBranchBindingAdversary(Rng rng) : rng_(std::move(rng)) {}
  void on_key(const KeyPtr& key) override;
  std::uint8_t answer(std::size_t j, const BitString& h) override;
  StringPair reveal() override;

 private:
  Rng rng_;
  KeyPtr key_;
  BitString x_;
  BitString y_;
};

/// Commits honestly to x and reveals (x, x).
class EqualPairBindingAdversary : public BindingAdversary {
 public:
  explicit EqualPairBindingAdversary(Rng rng) : rng_(std::move(rng)) {}
  void on_key(const KeyPtr& key) override;
  std::uint8_t answer(std::size_t j, const BitString& h) override;
  StringPair reveal() override { return {x_, x_}; }

 private:
  Rng rng_;
  BitString x_;
  BitString y_;
};

}  // namespace qproof
