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

#include <string>
#include <vector>

#include "json.hpp"
#include "qproof/channel.hpp"
#include "qproof/message.hpp"

namespace qproof {

enum class Role { Verifier, Prover };

/// A protocol participant as an event-driven state machine. `start` yields
/// the messages it opens with; every incoming message yields the replies it
/// sends before waiting again. Throwing ProtocolError voids the session.
class Party {
 public:
  virtual ~Party() = default;
  virtual std::vector<Message> start() { return {}; }
  virtual std::vector<Message> on_message(const Message& m) = 0;
  virtual bool finished() const = 0;
};

struct TranscriptEntry {
  Role from;
  Message message;
  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

using Transcript = std::vector<TranscriptEntry>;

nlohmann::json transcript_to_json(const Transcript& t);

enum class SessionStatus { Complete, Void };

struct SessionRun {
  SessionStatus status = SessionStatus::Complete;
  std::string void_reason;
  Transcript transcript;
};

/// Runs both parties in the calling thread, delivering messages in order.
/// Protocol errors and stalls void the session.
SessionRun run_local(Party& verifier, Party& prover, bool record = false);

/// Runs one party over a channel until it finishes. Transport, frame, and
/// protocol errors void the session. The recorded transcript is this side's
/// view of the exchange in send/receive order.
SessionRun run_over_channel(Party& self, Role self_role, Channel& channel, bool record = false);

}  // namespace qproof
