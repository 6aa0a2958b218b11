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

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "json.hpp"
#include "qproof/channel.hpp"
#include "qproof/glevin.hpp"
#include "qproof/poq.hpp"
#include "qproof/rsp.hpp"

namespace qproof {

// Orchestration shared by the C API and the command-line tool: key files,
// multi-session runs in either role, and the extraction demo.

enum class ProtocolKind { Rsp, Poq };

struct SessionReport {
  SessionStatus status = SessionStatus::Complete;
  /// PoQ verdict; for RSP, whether the outcome invariants held (local runs)
  /// or simply that the session completed.
  std::optional<bool> verdict;
  std::string detail;
};

struct RunConfig {
  ProtocolKind protocol = ProtocolKind::Poq;
  Strategy strategy = Strategy::Quantum;
  BobMode mode = BobMode::Escrow;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  unsigned threads = 1;
  std::chrono::milliseconds timeout = kDefaultTimeout;
  std::function<void(std::uint64_t, const SessionReport&)> on_session;
};

struct RspStats {
  std::uint64_t trials = 0;
  std::uint64_t void_sessions = 0;
  std::uint64_t consistent = 0;
};

struct RunSummary {
  ProtocolKind protocol = ProtocolKind::Poq;
  std::string role;
  BenchStats poq;
  RspStats rsp;

  nlohmann::json to_json() const;
};

inline constexpr const char* kRunSchema = "qproof.run.v1";

struct Endpoint {
  std::string address;
  bool listen = false;
};

/// Both parties in this process.
RunSummary run_local_sessions(const RunConfig& config, const SharedKeyPair& keypair);
/// Verifier side over TCP; one connection per session.
RunSummary run_verifier(const RunConfig& config, const SharedKeyPair& keypair,
                        const Endpoint& endpoint);
/// Prover side over TCP. `trapdoor` is the escrow (quantum/escrow) or the
/// leaked trapdoor (leaky); other strategies ignore it.
RunSummary run_prover(const RunConfig& config, TrapdoorPtr trapdoor, const Endpoint& endpoint);

void save_keypair(const TdpKeyPair& pair, const std::string& public_path,
                  const std::string& trapdoor_path);
TdpKey load_key(const std::string& path);
TdpTrapdoor load_trapdoor(const std::string& path);

struct GlDemoReport {
  std::size_t n = 0;
  bool leaky = false;
  ExtractionResult result;

  nlohmann::json to_json() const;
};

/// Runs the composed extraction attack once against the leaky test prover
/// or the optimal classical prover on a fresh modular key (table key when
/// n < 7).
GlDemoReport run_gl_demo(std::size_t n, bool leaky, std::uint64_t seed);

}  // namespace qproof
