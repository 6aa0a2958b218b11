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

#include "qproof/session.hpp"

#include <deque>
#include <utility>

#include "qproof/errors.hpp"

namespace qproof {
namespace {

// Generous bound on messages per session; a correct run of n-bit PoQ uses
// about n + 6.
constexpr std::size_t kMaxMessages = 1 << 20;

}  // namespace

nlohmann::json transcript_to_json(const Transcript& t) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : t) {
    out.push_back({{"from", e.from == Role::Verifier ? "verifier" : "prover"},
                   {"message", message_to_json(e.message)}});
  }
  return out;
}

SessionRun run_local(Party& verifier, Party& prover, bool record) {
  SessionRun run;
  std::deque<TranscriptEntry> in_flight;
  auto post = [&](Role from, std::vector<Message> msgs) {
    for (auto& m : msgs) in_flight.push_back({from, std::move(m)});
  };
  try {
    post(Role::Verifier, verifier.start());
    post(Role::Prover, prover.start());
    std::size_t delivered = 0;
    while (!in_flight.empty()) {
      if (++delivered > kMaxMessages) throw ProtocolError("message limit exceeded");
      TranscriptEntry e = std::move(in_flight.front());
      in_flight.pop_front();
      Party& target = e.from == Role::Verifier ? prover : verifier;
      const Role target_role = e.from == Role::Verifier ? Role::Prover : Role::Verifier;
      if (target.finished()) throw ProtocolError("message sent to a finished party");
      auto replies = target.on_message(e.message);
      if (record) run.transcript.push_back(std::move(e));
      post(target_role, std::move(replies));
    }
    if (!verifier.finished() || !prover.finished()) {
      throw ProtocolError("session stalled before both parties finished");
    }
  } catch (const ProtocolError& e) {
    run.status = SessionStatus::Void;
    run.void_reason = e.what();
  }
  return run;
}

SessionRun run_over_channel(Party& self, Role self_role, Channel& channel, bool record) {
  SessionRun run;
  const Role peer_role = self_role == Role::Verifier ? Role::Prover : Role::Verifier;
  auto send_all = [&](std::vector<Message> msgs) {
    for (auto& m : msgs) {
      channel.send(m);
      if (record) run.transcript.push_back({self_role, std::move(m)});
    }
  };
  try {
    send_all(self.start());
    std::size_t received = 0;
    while (!self.finished()) {
      if (++received > kMaxMessages) throw ProtocolError("message limit exceeded");
      Message m = channel.receive();
      auto replies = self.on_message(m);
      if (record) run.transcript.push_back({peer_role, std::move(m)});
      send_all(std::move(replies));
    }
  } catch (const ProtocolError& e) {
    run.status = SessionStatus::Void;
    run.void_reason = e.what();
  } catch (const TransportError& e) {
    run.status = SessionStatus::Void;
    run.void_reason = e.what();
  } catch (const DecodeError& e) {
    run.status = SessionStatus::Void;
    run.void_reason = e.what();
  }
  return run;
}

}  // namespace qproof
