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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qproof/bits.hpp"
#include "qproof/qsim.hpp"
#include "qproof/rng.hpp"
#include "qproof/rsp.hpp"
#include "qproof/session.hpp"
#include "qproof/tdp.hpp"

namespace qproof {

/// Exact honest acceptance probability 1/2 + cos²(π/8)/2 = 1/2 + (2+√2)/8.
inline constexpr double kHonestAcceptance = 0.5 + kCos2PiOver8 / 2;
/// Acceptance of the best classical strategy.
inline constexpr double kClassicalAcceptance = 0.875;

struct PreimagePayload {
  BitString x;
  friend bool operator==(const PreimagePayload&, const PreimagePayload&) = default;
};

struct EquationPayload {
  BitString d;
  std::uint8_t v2 = 0;
  std::uint8_t eta = 0;
  friend bool operator==(const EquationPayload&, const EquationPayload&) = default;
};

using BranchPayload = std::variant<PreimagePayload, EquationPayload>;

/// v1 = 0: accept iff x ∈ {x0, x1}.
/// v1 = 1: accept iff (r·x0 = r·x1 ∧ η = r·x0) ∨ (r·x0 ≠ r·x1 ∧ η = v2 ⊕ d·(x0⊕x1)).
/// A payload that does not match v1, or has the wrong length, rejects.
bool accept_predicate(const BitString& x0, const BitString& x1, const BitString& r, bool v1,
                      const BranchPayload& payload);

struct PoqTranscript {
  RspTranscript rsp;
  std::uint8_t v1 = 0;
  BitString r;
  std::optional<BranchPayload> payload;
  std::optional<bool> verdict;

  nlohmann::json to_json() const;
};

/// The verifier: RSP as Alice, then challenge v1 and r together; for v1 = 1
/// receive d, send a fresh v2, receive η. Ends by sending the verdict.
class PoqVerifier : public Party {
 public:
  PoqVerifier(SharedKeyPair keypair, Rng rng);

  std::vector<Message> start() override;
  std::vector<Message> on_message(const Message& m) override;
  bool finished() const override { return transcript_.verdict.has_value(); }

  const std::optional<bool>& verdict() const noexcept { return transcript_.verdict; }
  /// Alice's pair once the RSP phase is over.
  const std::optional<StringPair>& alice_pair() const noexcept { return alice_.output(); }
  const PoqTranscript& transcript() const noexcept { return transcript_; }

 private:
  enum class Stage { Hashing, AwaitPreimage, AwaitEquation, AwaitBasis, Done };

  std::vector<Message> challenge();
  std::vector<Message> conclude(bool accept);

  AliceSession alice_;
  Rng rng_;
  Stage stage_ = Stage::Hashing;
  PoqTranscript transcript_;
};

/// Base for every prover strategy.
///
/// A prover is a classical object whose whole state (transcript so far plus
/// its randomness tape) can be copied with `clone`; rewinding a copy to an
/// earlier point and feeding it different challenges is how extraction
/// queries the prover.
class Prover : public HashingResponder {
 public:
  explicit Prover(Rng tape) : tape_(std::move(tape)) {}

  virtual std::unique_ptr<Prover> clone() const = 0;
  virtual std::string_view name() const = 0;

  /// Stand-alone RSP: the prover is done once hashing is.
  void set_rsp_only(bool rsp_only) { rsp_only_ = rsp_only; }
  bool finished() const override;
  const std::optional<bool>& verdict() const noexcept { return verdict_; }

 protected:
  std::vector<Message> after_hashing(const Message& m) final;

  virtual BitString respond_preimage(const BitString& r) = 0;
  virtual BitString respond_equation(const BitString& r) = 0;
  virtual bool respond_basis(bool v2) = 0;

  Rng tape_;

 private:
  enum class Stage { AwaitChallenge1, AwaitChallenge2, AwaitVerdict, Done };
  Stage stage_ = Stage::AwaitChallenge1;
  bool rsp_only_ = false;
  std::optional<bool> verdict_;
};

/// Honest prover: simulates the quantum register exactly.
class QuantumProver final : public Prover {
 public:
  QuantumProver(BobMode mode, TrapdoorPtr escrow, Rng tape)
      : Prover(std::move(tape)), mode_(mode), escrow_(std::move(escrow)) {}

  std::unique_ptr<Prover> clone() const override { return std::make_unique<QuantumProver>(*this); }
  std::string_view name() const override { return "quantum"; }
  const std::optional<TwoTermState>& state() const noexcept { return state_; }

 protected:
  void on_key() override;
  bool answer_query(const BitString& h) override;
  void on_hashing_complete() override;
  BitString respond_preimage(const BitString& r) override;
  BitString respond_equation(const BitString& r) override;
  bool respond_basis(bool v2) override;

 private:
  BobMode mode_;
  TrapdoorPtr escrow_;
  std::optional<HonestRegister> reg_;  // dropped once hashing ends
  std::optional<TwoTermState> state_;
  std::optional<QubitState> qubit_;
};

/// Best classical strategy: commit to a random x, so v1 = 0 always passes;
/// on v1 = 1 send a random d and η = r·x, which passes whenever r·x0 = r·x1
/// and half the time otherwise. Acceptance 7/8.
class ClassicalOptimalProver final : public Prover {
 public:
  using Prover::Prover;
  std::unique_ptr<Prover> clone() const override {
    return std::make_unique<ClassicalOptimalProver>(*this);
  }
  std::string_view name() const override { return "classical-optimal"; }
  const BitString& committed() const noexcept { return x_; }

 protected:
  void on_key() override;
  bool answer_query(const BitString& h) override;
  BitString respond_preimage(const BitString& r) override;
  BitString respond_equation(const BitString& r) override;
  bool respond_basis(bool v2) override;

 private:
  BitString x_;
  BitString y_;
  BitString r_;
};

/// Uniform answers everywhere. Acceptance about 1/4.
class RandomBaselineProver final : public Prover {
 public:
  using Prover::Prover;
  std::unique_ptr<Prover> clone() const override {
    return std::make_unique<RandomBaselineProver>(*this);
  }
  std::string_view name() const override { return "classical-random"; }

 protected:
  bool answer_query(const BitString& h) override;
  BitString respond_preimage(const BitString& r) override;
  BitString respond_equation(const BitString& r) override;
  bool respond_basis(bool v2) override;
};

/// Honest commitment like the optimal strategy but a uniform η. Acceptance 3/4.
class HonestCommitRandomEtaProver final : public Prover {
 public:
  using Prover::Prover;
  std::unique_ptr<Prover> clone() const override {
    return std::make_unique<HonestCommitRandomEtaProver>(*this);
  }
  std::string_view name() const override { return "classical-baseline"; }

 protected:
  void on_key() override;
  bool answer_query(const BitString& h) override;
  BitString respond_preimage(const BitString& r) override;
  BitString respond_equation(const BitString& r) override;
  bool respond_basis(bool v2) override;

 private:
  BitString x_;
  BitString y_;
};

/// Test double that knows the trapdoor, hence both x0 and x1, and answers
/// every challenge correctly. Used to exercise the extraction path.
class LeakyProver final : public Prover {
 public:
  LeakyProver(TrapdoorPtr td, Rng tape) : Prover(std::move(tape)), td_(std::move(td)) {}
  std::unique_ptr<Prover> clone() const override { return std::make_unique<LeakyProver>(*this); }
  std::string_view name() const override { return "leaky"; }

 protected:
  bool answer_query(const BitString& h) override;
  void on_hashing_complete() override;
  BitString respond_preimage(const BitString& r) override;
  BitString respond_equation(const BitString& r) override;
  bool respond_basis(bool v2) override;

 private:
  TrapdoorPtr td_;
  std::optional<StringPair> pair_;
  BitString r_;
  BitString d_;
};

enum class Strategy { Quantum, ClassicalOptimal, ClassicalBaseline, ClassicalRandom, Leaky };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

struct ProverConfig {
  Strategy strategy = Strategy::Quantum;
  BobMode mode = BobMode::Escrow;
  /// Escrowed trapdoor (quantum/escrow) or leaked trapdoor (leaky).
  TrapdoorPtr trapdoor;
};

std::unique_ptr<Prover> make_prover(const ProverConfig& config, Rng tape);

/// Per-session random streams derived from a master seed. Verifier and
/// prover draw from disjoint streams, so a session's transcript depends only
/// on (seed, index) and not on the transport or thread schedule.
Rng key_stream(std::uint64_t seed);
Rng session_key_stream(std::uint64_t seed, std::uint64_t index);
Rng verifier_stream(std::uint64_t seed, std::uint64_t index);
Rng prover_stream(std::uint64_t seed, std::uint64_t index);

struct PoqSessionResult {
  SessionStatus status = SessionStatus::Complete;
  std::string void_reason;
  std::optional<bool> verdict;
  PoqTranscript transcript;
  std::optional<StringPair> alice_pair;
  Transcript messages;
};

/// One verifier/prover session in the calling thread.
PoqSessionResult run_poq_session(const SharedKeyPair& keypair, Prover& prover, Rng verifier_rng,
                                 bool record_messages = false);

// --- benchmarking --------------------------------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct BranchTally {
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;

  double estimate() const;
  /// 95% Wilson score interval.
  Interval wilson() const;
  BranchTally& operator+=(const BranchTally& o) {
    trials += o.trials;
    accepted += o.accepted;
    return *this;
  }
};

struct BenchStats {
  std::string strategy;
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t void_sessions = 0;
  BranchTally v1_0;       // p_0
  BranchTally v1_1_v2_0;  // p_{1,0}
  BranchTally v1_1_v2_1;  // p_{1,1}
  /// Per-session outcome when recorded: 1 accept, 0 reject, -1 void.
  std::vector<std::int8_t> verdicts;

  /// p_1: pooled over both v2 branches, i.e. the count-weighted average of
  /// p_{1,0} and p_{1,1}.
  BranchTally v1_1() const;
  BranchTally overall() const;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

inline constexpr const char* kStatsSchema = "qproof.bench.v1";

struct BenchConfig {
  Strategy strategy = Strategy::Quantum;
  BobMode mode = BobMode::Escrow;
  TdpConfig key_config = ModularConfig{33};
  /// Generate a new key pair for every session instead of one per run.
  bool fresh_key_per_session = false;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool record_verdicts = false;
};

/// Runs independent seeded sessions and tallies acceptance per branch.
/// Results depend only on the config, never on `threads`. When `keypair` is
/// given it replaces key generation.
BenchStats bench(const BenchConfig& config, const std::optional<SharedKeyPair>& keypair = {});

}  // namespace qproof
