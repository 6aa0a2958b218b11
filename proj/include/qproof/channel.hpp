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
#include <memory>
#include <string>
#include <utility>

#include "qproof/message.hpp"

namespace qproof {

inline constexpr std::chrono::milliseconds kDefaultTimeout{30000};

/// One endpoint of a session. Blocking send/receive of whole messages; the
/// protocol state machines guarantee strict alternation. A receive that
/// times out or finds the peer gone throws TransportError, which voids the
/// session. Frame errors surface as DecodeError.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const Message& m) = 0;
  virtual Message receive() = 0;
};

/// Two connected endpoints in one process. Messages are framed and decoded
/// exactly as on a socket.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> in_process(
    std::chrono::milliseconds timeout = kDefaultTimeout);

/// Bound TCP listener. Each accepted connection carries one session.
class SocketListener {
 public:
  /// `address` is "host:port"; port 0 picks an ephemeral port.
  static SocketListener listen(const std::string& address,
                               std::chrono::milliseconds timeout = kDefaultTimeout);

  SocketListener(SocketListener&& other) noexcept;
  SocketListener& operator=(SocketListener&& other) noexcept;
  SocketListener(const SocketListener&) = delete;
  SocketListener& operator=(const SocketListener&) = delete;
  ~SocketListener();

  std::uint16_t port() const noexcept { return port_; }
  /// Waits up to the timeout for one connection.
  std::unique_ptr<Channel> accept();

 private:
  SocketListener(int fd, std::uint16_t port, std::chrono::milliseconds timeout)
      : fd_(fd), port_(port), timeout_(timeout) {}

  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::chrono::milliseconds timeout_;
};

/// Connects to "host:port", retrying until the timeout while the peer is
/// not yet listening.
std::unique_ptr<Channel> socket_connect(const std::string& address,
                                        std::chrono::milliseconds timeout = kDefaultTimeout);

}  // namespace qproof
