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

#include "qproof/poq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "qproof/errors.hpp"

namespace qproof {

bool accept_predicate(const BitString& x0, const BitString& x1, const BitString& r, bool v1,
                      const BranchPayload& payload) {
  if (!v1) {
    const auto* p = std::get_if<PreimagePayload>(&payload);
    return p != nullptr && (p->x == x0 || p->x == x1);
  }
  const auto* e = std::get_if<EquationPayload>(&payload);
  if (e == nullptr || e->d.size() != x0.size() || r.size() != x0.size()) return false;
  const bool b0 = inner_product(r, x0);
  const bool b1 = inner_product(r, x1);
  const bool eta = e->eta != 0;
  if (b0 == b1) return eta == b0;
  return eta == ((e->v2 != 0) != inner_product(e->d, x0 ^ x1));
}

nlohmann::json PoqTranscript::to_json() const {
  nlohmann::json j = {{"rsp", rsp.to_json()}, {"v1", v1}, {"r", r.to_string()}};
  if (payload) {
    if (const auto* p = std::get_if<PreimagePayload>(&*payload)) {
      j["x"] = p->x.to_string();
    } else {
      const auto& e = std::get<EquationPayload>(*payload);
      j["d"] = e.d.to_string();
      j["v2"] = e.v2;
      j["eta"] = e.eta;
    }
  }
  if (verdict) j["verdict"] = *verdict;
  return j;
}

// --- verifier ------------------------------------------------------------------

PoqVerifier::PoqVerifier(SharedKeyPair keypair, Rng rng)
    : alice_(std::move(keypair), rng), rng_(std::move(rng)) {}

std::vector<Message> PoqVerifier::start() {
  auto out = alice_.start();
  if (alice_.finished()) {
    auto c = challenge();
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

std::vector<Message> PoqVerifier::challenge() {
  transcript_.rsp = alice_.transcript();
  // r is drawn and sent even when v1 = 0.
  transcript_.v1 = rng_.bit() ? 1 : 0;
  transcript_.r = BitString::random(alice_.n(), rng_);
  stage_ = transcript_.v1 == 0 ? Stage::AwaitPreimage : Stage::AwaitEquation;
  return {Challenge1Message{transcript_.v1, transcript_.r}};
}

std::vector<Message> PoqVerifier::conclude(bool accept) {
  transcript_.verdict = accept;
  stage_ = Stage::Done;
  return {VerdictMessage{accept}};
}

std::vector<Message> PoqVerifier::on_message(const Message& m) {
  if (stage_ == Stage::Hashing) {
    auto out = alice_.on_message(m);
    if (alice_.finished()) {
      auto c = challenge();
      out.insert(out.end(), c.begin(), c.end());
    }
    return out;
  }
  const auto& [x0, x1] = *alice_.output();
  switch (stage_) {
    case Stage::AwaitPreimage: {
      const auto* p = std::get_if<PreimageMessage>(&m);
      if (p == nullptr || p->x.size() != alice_.n()) throw ProtocolError("expected a preimage");
      transcript_.payload = PreimagePayload{p->x};
      return conclude(accept_predicate(x0, x1, transcript_.r, false, *transcript_.payload));
    }
    case Stage::AwaitEquation: {
      const auto* e = std::get_if<EquationMessage>(&m);
      if (e == nullptr || e->d.size() != alice_.n()) throw ProtocolError("expected an equation");
      const std::uint8_t v2 = rng_.bit() ? 1 : 0;
      transcript_.payload = EquationPayload{e->d, v2, 0};
      stage_ = Stage::AwaitBasis;
      return {Challenge2Message{v2}};
    }
    case Stage::AwaitBasis: {
      const auto* b = std::get_if<BasisMessage>(&m);
      if (b == nullptr || b->eta > 1) throw ProtocolError("expected a basis outcome");
      auto& payload = std::get<EquationPayload>(*transcript_.payload);
      payload.eta = b->eta;
      return conclude(accept_predicate(x0, x1, transcript_.r, true, payload));
    }
    default:
      throw ProtocolError("message after the verdict");
  }
}

// --- prover base -----------------------------------------------------------------

bool Prover::finished() const {
  if (rsp_only_) return hashing_complete();
  return stage_ == Stage::Done;
}

std::vector<Message> Prover::after_hashing(const Message& m) {
  if (rsp_only_) throw ProtocolError("message after a stand-alone RSP session");
  switch (stage_) {
    case Stage::AwaitChallenge1: {
      const auto* c = std::get_if<Challenge1Message>(&m);
      if (c == nullptr || c->r.size() != key_->n()) throw ProtocolError("expected challenge 1");
      if (c->v1 == 0) {
        stage_ = Stage::AwaitVerdict;
        return {PreimageMessage{respond_preimage(c->r)}};
      }
      stage_ = Stage::AwaitChallenge2;
      return {EquationMessage{respond_equation(c->r)}};
    }
    case Stage::AwaitChallenge2: {
      const auto* c = std::get_if<Challenge2Message>(&m);
      if (c == nullptr) throw ProtocolError("expected challenge 2");
      stage_ = Stage::AwaitVerdict;
      return {BasisMessage{static_cast<std::uint8_t>(respond_basis(c->v2 != 0) ? 1 : 0)}};
    }
    case Stage::AwaitVerdict: {
      const auto* v = std::get_if<VerdictMessage>(&m);
      if (v == nullptr) throw ProtocolError("expected the verdict");
      verdict_ = v->accept;
      stage_ = Stage::Done;
      return {};
    }
    case Stage::Done:
      break;
  }
  throw ProtocolError("message after the verdict");
}

// --- quantum ---------------------------------------------------------------------

void QuantumProver::on_key() { reg_.emplace(key_, mode_, escrow_); }

bool QuantumProver::answer_query(const BitString& h) { return reg_->measure(h, tape_); }

void QuantumProver::on_hashing_complete() {
  state_ = reg_->final_state(transcript());
  reg_.reset();
}

BitString QuantumProver::respond_preimage(const BitString&) {
  return measure_computational(*state_, tape_);
}

BitString QuantumProver::respond_equation(const BitString& r) {
  auto [d, qubit] = hadamard_collapse(*state_, r, tape_);
  qubit_ = qubit;
  return d;
}

bool QuantumProver::respond_basis(bool v2) { return measure_rotated(*qubit_, v2, tape_); }

// --- classical strategies -----------------------------------------------------------

void ClassicalOptimalProver::on_key() {
  x_ = BitString::random(key_->n(), tape_);
  y_ = eval(*key_, x_);
}

bool ClassicalOptimalProver::answer_query(const BitString& h) { return inner_product(h, y_); }

BitString ClassicalOptimalProver::respond_preimage(const BitString&) { return x_; }

BitString ClassicalOptimalProver::respond_equation(const BitString& r) {
  r_ = r;
  return BitString::random(key_->n(), tape_);
}

bool ClassicalOptimalProver::respond_basis(bool) { return inner_product(r_, x_); }

bool RandomBaselineProver::answer_query(const BitString&) { return tape_.bit(); }

BitString RandomBaselineProver::respond_preimage(const BitString&) {
  return BitString::random(key_->n(), tape_);
}

BitString RandomBaselineProver::respond_equation(const BitString&) {
  return BitString::random(key_->n(), tape_);
}

bool RandomBaselineProver::respond_basis(bool) { return tape_.bit(); }

void HonestCommitRandomEtaProver::on_key() {
  x_ = BitString::random(key_->n(), tape_);
  y_ = eval(*key_, x_);
}

bool HonestCommitRandomEtaProver::answer_query(const BitString& h) { return inner_product(h, y_); }

BitString HonestCommitRandomEtaProver::respond_preimage(const BitString&) { return x_; }

BitString HonestCommitRandomEtaProver::respond_equation(const BitString&) {
  return BitString::random(key_->n(), tape_);
}

bool HonestCommitRandomEtaProver::respond_basis(bool) { return tape_.bit(); }

bool LeakyProver::answer_query(const BitString&) { return tape_.bit(); }

void LeakyProver::on_hashing_complete() { pair_ = alice_output(*td_, transcript()); }

BitString LeakyProver::respond_preimage(const BitString&) {
  return tape_.bit() ? pair_->second : pair_->first;
}

BitString LeakyProver::respond_equation(const BitString& r) {
  r_ = r;
  d_ = BitString::random(key_->n(), tape_);
  return d_;
}

bool LeakyProver::respond_basis(bool v2) {
  const auto& [x0, x1] = *pair_;
  const bool b0 = inner_product(r_, x0);
  if (b0 == inner_product(r_, x1)) return b0;
  return v2 != inner_product(d_, x0 ^ x1);
}

// --- factory ---------------------------------------------------------------------------

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Quantum:
      return "quantum";
    case Strategy::ClassicalOptimal:
      return "classical-optimal";
    case Strategy::ClassicalBaseline:
      return "classical-baseline";
    case Strategy::ClassicalRandom:
      return "classical-random";
    case Strategy::Leaky:
      return "leaky";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (auto s : {Strategy::Quantum, Strategy::ClassicalOptimal, Strategy::ClassicalBaseline,
                 Strategy::ClassicalRandom, Strategy::Leaky}) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

std::unique_ptr<Prover> make_prover(const ProverConfig& config, Rng tape) {
  switch (config.strategy) {
    case Strategy::Quantum:
      if (config.mode == BobMode::Escrow && !config.trapdoor) {
        throw ConfigurationError("quantum prover in escrow mode needs the escrowed trapdoor");
      }
      return std::make_unique<QuantumProver>(config.mode, config.trapdoor, std::move(tape));
    case Strategy::ClassicalOptimal:
      return std::make_unique<ClassicalOptimalProver>(std::move(tape));
    case Strategy::ClassicalBaseline:
      return std::make_unique<HonestCommitRandomEtaProver>(std::move(tape));
    case Strategy::ClassicalRandom:
      return std::make_unique<RandomBaselineProver>(std::move(tape));
    case Strategy::Leaky:
      if (!config.trapdoor) throw ConfigurationError("leaky prover needs the trapdoor");
      return std::make_unique<LeakyProver>(config.trapdoor, std::move(tape));
  }
  throw ConfigurationError("unknown strategy");
}

Rng key_stream(std::uint64_t seed) { return Rng::for_stream(seed, 0); }
Rng session_key_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng::for_stream(seed, 3 * index + 3);
}
Rng verifier_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng::for_stream(seed, 3 * index + 1);
}
Rng prover_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng::for_stream(seed, 3 * index + 2);
}

PoqSessionResult run_poq_session(const SharedKeyPair& keypair, Prover& prover, Rng verifier_rng,
                                 bool record_messages) {
  PoqVerifier verifier(keypair, std::move(verifier_rng));
  SessionRun run = run_local(verifier, prover, record_messages);
  PoqSessionResult result;
  result.status = run.status;
  result.void_reason = std::move(run.void_reason);
  result.messages = std::move(run.transcript);
  result.transcript = verifier.transcript();
  result.alice_pair = verifier.alice_pair();
  if (run.status == SessionStatus::Complete) result.verdict = verifier.verdict();
  return result;
}

// --- statistics ---------------------------------------------------------------------------

double BranchTally::estimate() const {
  return trials == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(trials);
}

Interval BranchTally::wilson() const {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = estimate();
  const double denom = 1 + z * z / n;
  const double center = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

BranchTally BenchStats::v1_1() const {
  BranchTally t = v1_1_v2_0;
  t += v1_1_v2_1;
  return t;
}

BranchTally BenchStats::overall() const {
  BranchTally t = v1_0;
  t += v1_1();
  return t;
}

namespace {

nlohmann::json tally_json(const BranchTally& t) {
  const Interval ci = t.wilson();
  return {{"trials", t.trials},
          {"accepted", t.accepted},
          {"estimate", t.estimate()},
          {"ci95", {ci.lo, ci.hi}}};
}

}  // namespace

nlohmann::json BenchStats::to_json() const {
  return {{"schema", kStatsSchema},
          {"strategy", strategy},
          {"n", n},
          {"trials", trials},
          {"void_sessions", void_sessions},
          {"p0", tally_json(v1_0)},
          {"p1", tally_json(v1_1())},
          {"p10", tally_json(v1_1_v2_0)},
          {"p11", tally_json(v1_1_v2_1)},
          {"overall", tally_json(overall())}};
}

std::string BenchStats::to_table() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "strategy %s, n = %zu, %llu sessions (%llu void)\n",
                strategy.c_str(), n, static_cast<unsigned long long>(trials),
                static_cast<unsigned long long>(void_sessions));
  out << line;
  std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s   %s\n", "branch", "trials", "accepted",
                "estimate", "95% CI");
  out << line;
  auto row = [&](const char* label, const BranchTally& t) {
    const Interval ci = t.wilson();
    std::snprintf(line, sizeof(line), "%-10s %10llu %10llu %10.6f   [%.6f, %.6f]\n", label,
                  static_cast<unsigned long long>(t.trials),
                  static_cast<unsigned long long>(t.accepted), t.estimate(), ci.lo, ci.hi);
    out << line;
  };
  row("p0", v1_0);
  row("p1", v1_1());
  row("p1,0", v1_1_v2_0);
  row("p1,1", v1_1_v2_1);
  row("overall", overall());
  return out.str();
}

BenchStats bench(const BenchConfig& config, const std::optional<SharedKeyPair>& keypair) {
  if (config.trials == 0) throw ConfigurationError("bench needs at least one trial");

  std::optional<SharedKeyPair> shared = keypair;
  if (!shared && !config.fresh_key_per_session) {
    Rng rng = key_stream(config.seed);
    shared = SharedKeyPair::from(gen(config.key_config, rng));
  }

  const unsigned threads = std::max(1u, config.threads);
  std::vector<BenchStats> partial(threads);
  std::vector<std::int8_t> verdicts(config.record_verdicts ? config.trials : 0, -1);
  std::vector<std::exception_ptr> errors(threads);

  auto worker = [&](unsigned t) {
    try {
      BenchStats& local = partial[t];
      for (std::uint64_t i = t; i < config.trials; i += threads) {
        SharedKeyPair kp = shared ? *shared : [&] {
          Rng rng = session_key_stream(config.seed, i);
          return SharedKeyPair::from(gen(config.key_config, rng));
        }();
        local.n = kp.key->n();
        auto prover = make_prover(ProverConfig{config.strategy, config.mode, kp.trapdoor},
                                  prover_stream(config.seed, i));
        const auto result = run_poq_session(kp, *prover, verifier_stream(config.seed, i));
        if (result.status == SessionStatus::Void) {
          ++local.void_sessions;
          continue;
        }
        const bool accept = *result.verdict;
        const auto& tr = result.transcript;
        BranchTally& branch = tr.v1 == 0 ? local.v1_0
                              : std::get<EquationPayload>(*tr.payload).v2 == 0 ? local.v1_1_v2_0
                                                                               : local.v1_1_v2_1;
        ++branch.trials;
        if (accept) ++branch.accepted;
        if (config.record_verdicts) verdicts[i] = accept ? 1 : 0;
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BenchStats stats;
  stats.strategy = std::string(strategy_name(config.strategy));
  stats.trials = config.trials;
  for (const auto& p : partial) {
    stats.n = std::max(stats.n, p.n);
    stats.void_sessions += p.void_sessions;
    stats.v1_0 += p.v1_0;
    stats.v1_1_v2_0 += p.v1_1_v2_0;
    stats.v1_1_v2_1 += p.v1_1_v2_1;
  }
  stats.verdicts = std::move(verdicts);
  return stats;
}

}  // namespace qproof
