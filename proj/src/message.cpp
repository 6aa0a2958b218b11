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

#include "qproof/message.hpp"

#include <algorithm>
#include <initializer_list>
#include <type_traits>

#include "qproof/errors.hpp"

namespace qproof {
namespace {

using nlohmann::json;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void require_fields(const json& j, std::initializer_list<const char*> fields) {
  if (j.size() != fields.size()) {
    throw ProtocolError("message '" + j.at("type").get<std::string>() + "' has " +
                        std::to_string(j.size()) + " fields, expected " +
                        std::to_string(fields.size()));
  }
  for (const char* f : fields) {
    if (!j.contains(f)) throw ProtocolError(std::string("missing field '") + f + "'");
  }
}

std::uint8_t bit_field(const json& j, const char* field) {
  const auto& v = j.at(field);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 1) {
    throw ProtocolError(std::string("field '") + field + "' must be 0 or 1");
  }
  return static_cast<std::uint8_t>(v.get<std::uint64_t>());
}

std::uint32_t round_field(const json& j) {
  const auto& v = j.at("j");
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 1 ||
      v.get<std::uint64_t>() > 0xffffffffu) {
    throw ProtocolError("round index must be a positive integer");
  }
  return static_cast<std::uint32_t>(v.get<std::uint64_t>());
}

BitString bits_field(const json& j, const char* field) {
  const auto& v = j.at(field);
  if (!v.is_string()) throw ProtocolError(std::string("field '") + field + "' must be a string");
  const auto& text = v.get_ref<const std::string&>();
  if (text.empty() || !std::all_of(text.begin(), text.end(),
                                   [](char c) { return c == '0' || c == '1'; })) {
    throw ProtocolError(std::string("field '") + field + "' is not a bit string");
  }
  return BitString::from_string(text);
}

}  // namespace

std::string_view message_tag(const Message& m) {
  return std::visit(Overloaded{
                        [](const KeyMessage&) { return std::string_view("key"); },
                        [](const HashQueryMessage&) { return std::string_view("hash_query"); },
                        [](const HashAnswerMessage&) { return std::string_view("hash_answer"); },
                        [](const Challenge1Message&) { return std::string_view("challenge1"); },
                        [](const PreimageMessage&) { return std::string_view("preimage"); },
                        [](const EquationMessage&) { return std::string_view("equation"); },
                        [](const Challenge2Message&) { return std::string_view("challenge2"); },
                        [](const BasisMessage&) { return std::string_view("basis"); },
                        [](const VerdictMessage&) { return std::string_view("verdict"); },
                    },
                    m);
}

json message_to_json(const Message& m) {
  json j = std::visit(
      Overloaded{
          [](const KeyMessage& k) -> json {
            if (!k.key) throw ContractViolation("key message without a key");
            return {{"key", k.key->to_json()}};
          },
          [](const HashQueryMessage& q) -> json { return {{"j", q.j}, {"h", q.h.to_string()}}; },
          [](const HashAnswerMessage& a) -> json { return {{"j", a.j}, {"c", a.c}}; },
          [](const Challenge1Message& c) -> json {
            return {{"v1", c.v1}, {"r", c.r.to_string()}};
          },
          [](const PreimageMessage& p) -> json { return {{"x", p.x.to_string()}}; },
          [](const EquationMessage& e) -> json { return {{"d", e.d.to_string()}}; },
          [](const Challenge2Message& c) -> json { return {{"v2", c.v2}}; },
          [](const BasisMessage& b) -> json { return {{"eta", b.eta}}; },
          [](const VerdictMessage& v) -> json { return {{"accept", v.accept}}; },
      },
      m);
  j["type"] = std::string(message_tag(m));
  return j;
}

Message message_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ProtocolError("message must be an object with a string 'type'");
  }
  const auto& type = j.at("type").get_ref<const std::string&>();
  if (type == "key") {
    require_fields(j, {"type", "key"});
    try {
      return KeyMessage{std::make_shared<const TdpKey>(TdpKey::from_json(j.at("key")))};
    } catch (const ConfigurationError& e) {
      throw ProtocolError(e.what());
    }
  }
  if (type == "hash_query") {
    require_fields(j, {"type", "j", "h"});
    return HashQueryMessage{round_field(j), bits_field(j, "h")};
  }
  if (type == "hash_answer") {
    require_fields(j, {"type", "j", "c"});
    return HashAnswerMessage{round_field(j), bit_field(j, "c")};
  }
  if (type == "challenge1") {
    require_fields(j, {"type", "v1", "r"});
    return Challenge1Message{bit_field(j, "v1"), bits_field(j, "r")};
  }
  if (type == "preimage") {
    require_fields(j, {"type", "x"});
    return PreimageMessage{bits_field(j, "x")};
  }
  if (type == "equation") {
    require_fields(j, {"type", "d"});
    return EquationMessage{bits_field(j, "d")};
  }
  if (type == "challenge2") {
    require_fields(j, {"type", "v2"});
    return Challenge2Message{bit_field(j, "v2")};
  }
  if (type == "basis") {
    require_fields(j, {"type", "eta"});
    return BasisMessage{bit_field(j, "eta")};
  }
  if (type == "verdict") {
    require_fields(j, {"type", "accept"});
    if (!j.at("accept").is_boolean()) throw ProtocolError("field 'accept' must be a boolean");
    return VerdictMessage{j.at("accept").get<bool>()};
  }
  throw ProtocolError("unknown message type '" + type + "'");
}

std::string encode_body(const Message& m) { return message_to_json(m).dump(); }

std::vector<std::uint8_t> encode(const Message& m) {
  const std::string body = encode_body(m);
  if (body.size() > kMaxFrameBody) throw ContractViolation("message exceeds the 1 MiB frame limit");
  const auto len = static_cast<std::uint32_t>(body.size());
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeader + body.size());
  out.push_back(static_cast<std::uint8_t>(len >> 24));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Message decode_body(std::string_view body) {
  if (body.size() > kMaxFrameBody) throw DecodeError("frame body exceeds 1 MiB", 0);
  json j;
  try {
    j = json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw DecodeError(std::string("invalid JSON: ") + e.what(), kFrameHeader + at);
  }
  // Re-serializing exposes whitespace, key order, and duplicate keys.
  const std::string canonical = j.dump();
  if (canonical != body) {
    const auto mismatch = std::mismatch(canonical.begin(), canonical.end(), body.begin(), body.end());
    const auto at = static_cast<std::size_t>(mismatch.second - body.begin());
    throw DecodeError("non-canonical JSON body", kFrameHeader + at);
  }
  try {
    return message_from_json(j);
  } catch (const ProtocolError& e) {
    throw DecodeError(e.what(), kFrameHeader);
  } catch (const json::exception& e) {
    throw DecodeError(e.what(), kFrameHeader);
  }
}

Message decode(std::span<const std::uint8_t> frame) {
  if (frame.size() < kFrameHeader) throw DecodeError("truncated frame header", frame.size());
  const std::size_t len = (std::size_t{frame[0]} << 24) | (std::size_t{frame[1]} << 16) |
                          (std::size_t{frame[2]} << 8) | std::size_t{frame[3]};
  if (len > kMaxFrameBody) throw DecodeError("declared frame length exceeds 1 MiB", 0);
  if (frame.size() < kFrameHeader + len) throw DecodeError("truncated frame body", frame.size());
  if (frame.size() > kFrameHeader + len) {
    throw DecodeError("trailing bytes after frame", kFrameHeader + len);
  }
  return decode_body(std::string_view(reinterpret_cast<const char*>(frame.data()) + kFrameHeader, len));
}

}  // namespace qproof
