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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qproof {

/// A caller broke an operation's precondition (length mismatch, index out of
/// range, malformed query set).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid construction parameters: key sizes, extractor constants, modes.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Key file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The peer sent a message that does not fit the protocol state. The session
/// is void; it is never counted as a reject.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Timeout, peer close, or socket failure. Also voids the session.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frame or message body rejected by the decoder. `position` is the byte
/// offset (within the frame) where decoding failed.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at byte " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace qproof
