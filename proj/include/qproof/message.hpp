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
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qproof/bits.hpp"
#include "qproof/tdp.hpp"

namespace qproof {

// Protocol messages. Bits travel as the integers 0/1 and bit strings as
// ASCII '0'/'1' text, leftmost bit first.

struct KeyMessage {
  std::shared_ptr<const TdpKey> key;

  friend bool operator==(const KeyMessage& a, const KeyMessage& b) {
    return a.key == b.key || (a.key && b.key && *a.key == *b.key);
  }
};

struct HashQueryMessage {
  std::uint32_t j = 0;
  BitString h;
  friend bool operator==(const HashQueryMessage&, const HashQueryMessage&) = default;
};

struct HashAnswerMessage {
  std::uint32_t j = 0;
  std::uint8_t c = 0;
  friend bool operator==(const HashAnswerMessage&, const HashAnswerMessage&) = default;
};

struct Challenge1Message {
  std::uint8_t v1 = 0;
  BitString r;
  friend bool operator==(const Challenge1Message&, const Challenge1Message&) = default;
};

struct PreimageMessage {
  BitString x;
  friend bool operator==(const PreimageMessage&, const PreimageMessage&) = default;
};

struct EquationMessage {
  BitString d;
  friend bool operator==(const EquationMessage&, const EquationMessage&) = default;
};

struct Challenge2Message {
  std::uint8_t v2 = 0;
  friend bool operator==(const Challenge2Message&, const Challenge2Message&) = default;
};

struct BasisMessage {
  std::uint8_t eta = 0;
  friend bool operator==(const BasisMessage&, const BasisMessage&) = default;
};

struct VerdictMessage {
  bool accept = false;
  friend bool operator==(const VerdictMessage&, const VerdictMessage&) = default;
};

using Message = std::variant<KeyMessage, HashQueryMessage, HashAnswerMessage, Challenge1Message,
                             PreimageMessage, EquationMessage, Challenge2Message, BasisMessage,
                             VerdictMessage>;

/// Wire tag ("key", "hash_query", ...).
std::string_view message_tag(const Message& m);

nlohmann::json message_to_json(const Message& m);
/// Strict: unknown tags, missing or extra fields, and non-bit values throw
/// ProtocolError.
Message message_from_json(const nlohmann::json& j);

inline constexpr std::size_t kMaxFrameBody = std::size_t{1} << 20;
inline constexpr std::size_t kFrameHeader = 4;

/// Canonical body: sorted keys, no whitespace.
std::string encode_body(const Message& m);
/// 4-byte big-endian length followed by the canonical JSON body.
std::vector<std::uint8_t> encode(const Message& m);

/// Decodes exactly one frame. Throws DecodeError for truncation, oversize,
/// trailing bytes, invalid or non-canonical JSON, and malformed messages.
Message decode(std::span<const std::uint8_t> frame);
/// Decodes a body whose length prefix was already consumed. Positions in
/// errors are offsets into the full frame.
Message decode_body(std::string_view body);

}  // namespace qproof
