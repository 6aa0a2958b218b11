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

#include "qproof/runner.hpp"

#include <fstream>
#include <sstream>

#include "qproof/errors.hpp"

namespace qproof {
namespace {

std::string pair_text(const StringPair& p) {
  return "{" + p.first.to_string() + ", " + p.second.to_string() + "}";
}

void tally(BenchStats& stats, const PoqTranscript& t, bool accept) {
  BranchTally& branch = t.v1 == 0 ? stats.v1_0
                        : std::get<EquationPayload>(*t.payload).v2 == 0 ? stats.v1_1_v2_0
                                                                         : stats.v1_1_v2_1;
  ++branch.trials;
  if (accept) ++branch.accepted;
}

// Reconstructs the challenge branch from the prover's view of the exchange.
void tally_from_messages(BenchStats& stats, const Transcript& messages, bool accept) {
  std::optional<std::uint8_t> v1;
  std::optional<std::uint8_t> v2;
  for (const auto& e : messages) {
    if (const auto* c1 = std::get_if<Challenge1Message>(&e.message)) v1 = c1->v1;
    if (const auto* c2 = std::get_if<Challenge2Message>(&e.message)) v2 = c2->v2;
  }
  BranchTally& branch = (!v1 || *v1 == 0) ? stats.v1_0
                        : (v2 && *v2 == 1) ? stats.v1_1_v2_1
                                           : stats.v1_1_v2_0;
  ++branch.trials;
  if (accept) ++branch.accepted;
}

void notify(const RunConfig& config, std::uint64_t i, SessionReport report) {
  if (config.on_session) config.on_session(i, report);
}

std::unique_ptr<Channel> open_channel(const Endpoint& endpoint, std::optional<SocketListener>& listener,
                                      std::chrono::milliseconds timeout) {
  if (endpoint.listen) {
    if (!listener) listener.emplace(SocketListener::listen(endpoint.address, timeout));
    return listener->accept();
  }
  return socket_connect(endpoint.address, timeout);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

nlohmann::json RunSummary::to_json() const {
  nlohmann::json j = {{"schema", kRunSchema},
                      {"protocol", protocol == ProtocolKind::Poq ? "poq" : "rsp"},
                      {"role", role}};
  if (protocol == ProtocolKind::Poq) {
    j["stats"] = poq.to_json();
  } else {
    j["stats"] = {{"trials", rsp.trials},
                  {"void_sessions", rsp.void_sessions},
                  {"consistent", rsp.consistent}};
  }
  return j;
}

RunSummary run_local_sessions(const RunConfig& config, const SharedKeyPair& keypair) {
  if (config.trials == 0) throw ConfigurationError("need at least one trial");
  RunSummary summary;
  summary.protocol = config.protocol;
  summary.role = "local";

  if (config.protocol == ProtocolKind::Poq) {
    BenchConfig bc;
    bc.strategy = config.strategy;
    bc.mode = config.mode;
    bc.trials = config.trials;
    bc.seed = config.seed;
    bc.threads = config.threads;
    bc.record_verdicts = static_cast<bool>(config.on_session);
    summary.poq = bench(bc, keypair);
    for (std::uint64_t i = 0; i < summary.poq.verdicts.size(); ++i) {
      const auto v = summary.poq.verdicts[i];
      SessionReport report;
      if (v < 0) {
        report.status = SessionStatus::Void;
      } else {
        report.verdict = v == 1;
      }
      notify(config, i, std::move(report));
    }
    return summary;
  }

  for (std::uint64_t i = 0; i < config.trials; ++i) {
    Rng verifier_rng = verifier_stream(config.seed, i);
    AliceSession alice(keypair, verifier_rng);
    auto prover = make_prover(ProverConfig{config.strategy, config.mode, keypair.trapdoor},
                              prover_stream(config.seed, i));
    prover->set_rsp_only(true);
    const SessionRun run = run_local(alice, *prover);
    ++summary.rsp.trials;
    SessionReport report;
    report.status = run.status;
    if (run.status == SessionStatus::Void) {
      ++summary.rsp.void_sessions;
      report.detail = run.void_reason;
    } else {
      RspOutcome outcome{*alice.output(), std::nullopt};
      if (const auto* q = dynamic_cast<const QuantumProver*>(prover.get())) {
        outcome.bob_state = q->state();
      }
      const bool ok = rsp_outcome_consistent(alice.transcript(), outcome);
      if (ok) ++summary.rsp.consistent;
      report.verdict = ok;
      report.detail = "alice " + pair_text(outcome.alice_pair);
    }
    notify(config, i, std::move(report));
  }
  return summary;
}

RunSummary run_verifier(const RunConfig& config, const SharedKeyPair& keypair,
                        const Endpoint& endpoint) {
  if (config.trials == 0) throw ConfigurationError("need at least one trial");
  RunSummary summary;
  summary.protocol = config.protocol;
  summary.role = "verifier";
  summary.poq.strategy = "remote";
  summary.poq.n = keypair.key->n();
  summary.poq.trials = config.trials;
  std::optional<SocketListener> listener;

  for (std::uint64_t i = 0; i < config.trials; ++i) {
    auto channel = open_channel(endpoint, listener, config.timeout);
    SessionReport report;
    if (config.protocol == ProtocolKind::Poq) {
      PoqVerifier verifier(keypair, verifier_stream(config.seed, i));
      const SessionRun run = run_over_channel(verifier, Role::Verifier, *channel);
      report.status = run.status;
      if (run.status == SessionStatus::Void) {
        ++summary.poq.void_sessions;
        report.detail = run.void_reason;
      } else {
        report.verdict = *verifier.verdict();
        tally(summary.poq, verifier.transcript(), *report.verdict);
      }
    } else {
      Rng rng = verifier_stream(config.seed, i);
      AliceSession alice(keypair, rng);
      const SessionRun run = run_over_channel(alice, Role::Verifier, *channel);
      ++summary.rsp.trials;
      report.status = run.status;
      if (run.status == SessionStatus::Void) {
        ++summary.rsp.void_sessions;
        report.detail = run.void_reason;
      } else {
        const bool ok = rsp_outcome_consistent(alice.transcript(), {*alice.output(), std::nullopt});
        if (ok) ++summary.rsp.consistent;
        report.verdict = ok;
        report.detail = "alice " + pair_text(*alice.output());
      }
    }
    notify(config, i, std::move(report));
  }
  return summary;
}

RunSummary run_prover(const RunConfig& config, TrapdoorPtr trapdoor, const Endpoint& endpoint) {
  if (config.trials == 0) throw ConfigurationError("need at least one trial");
  if (config.strategy == Strategy::Quantum && config.mode == BobMode::Escrow && !trapdoor) {
    throw ConfigurationError("quantum prover in escrow mode needs the escrowed trapdoor");
  }
  RunSummary summary;
  summary.protocol = config.protocol;
  summary.role = "prover";
  summary.poq.strategy = std::string(strategy_name(config.strategy));
  summary.poq.trials = config.trials;
  std::optional<SocketListener> listener;

  for (std::uint64_t i = 0; i < config.trials; ++i) {
    auto channel = open_channel(endpoint, listener, config.timeout);
    auto prover = make_prover(ProverConfig{config.strategy, config.mode, trapdoor},
                              prover_stream(config.seed, i));
    prover->set_rsp_only(config.protocol == ProtocolKind::Rsp);
    const SessionRun run = run_over_channel(*prover, Role::Prover, *channel, true);
    if (prover->key()) summary.poq.n = prover->key()->n();
    SessionReport report;
    report.status = run.status;
    if (run.status == SessionStatus::Void) {
      report.detail = run.void_reason;
      if (config.protocol == ProtocolKind::Poq) ++summary.poq.void_sessions;
      else ++summary.rsp.void_sessions;
    } else if (config.protocol == ProtocolKind::Poq) {
      report.verdict = *prover->verdict();
      tally_from_messages(summary.poq, run.transcript, *report.verdict);
    } else {
      report.verdict = true;
      ++summary.rsp.consistent;
      if (const auto* q = dynamic_cast<const QuantumProver*>(prover.get()); q && q->state()) {
        report.detail = "bob |" + q->state()->x0.to_string() + "> + |" +
                        q->state()->x1.to_string() + ">";
      }
    }
    if (config.protocol == ProtocolKind::Rsp) ++summary.rsp.trials;
    notify(config, i, std::move(report));
  }
  return summary;
}

void save_keypair(const TdpKeyPair& pair, const std::string& public_path,
                  const std::string& trapdoor_path) {
  write_text_file(public_path, pair.key.to_json().dump());
  write_text_file(trapdoor_path, pair.trapdoor.to_json().dump());
}

TdpKey load_key(const std::string& path) { return TdpKey::from_json(read_json_file(path)); }

TdpTrapdoor load_trapdoor(const std::string& path) {
  return TdpTrapdoor::from_json(read_json_file(path));
}

nlohmann::json GlDemoReport::to_json() const {
  nlohmann::json j = {{"n", n},
                      {"prover", leaky ? "leaky" : "classical-optimal"},
                      {"true_pair", {result.alice_pair.first.to_string(),
                                     result.alice_pair.second.to_string()}},
                      {"z", result.z.to_string()},
                      {"candidates", result.candidates},
                      {"success", result.success}};
  if (result.pair) {
    j["recovered_pair"] = {result.pair->first.to_string(), result.pair->second.to_string()};
  } else {
    j["recovered_pair"] = nullptr;
  }
  return j;
}

GlDemoReport run_gl_demo(std::size_t n, bool leaky, std::uint64_t seed) {
  if (n < 1) throw ConfigurationError("gl-demo needs n >= 1");
  Rng key_rng = key_stream(seed);
  TdpConfig cfg = n < 7 ? TdpConfig(MockTableConfig{n}) : TdpConfig(ModularConfig{n + 1});
  const SharedKeyPair keypair = SharedKeyPair::from(gen(cfg, key_rng));
  Rng rng = Rng::for_stream(seed, 1);
  auto factory = [&](Rng tape) -> std::unique_ptr<Prover> {
    if (leaky) return std::make_unique<LeakyProver>(keypair.trapdoor, std::move(tape));
    return std::make_unique<ClassicalOptimalProver>(std::move(tape));
  };
  GlDemoReport report;
  report.n = n;
  report.leaky = leaky;
  report.result = algorithm_C(factory, keypair, rng);
  return report;
}

}  // namespace qproof
