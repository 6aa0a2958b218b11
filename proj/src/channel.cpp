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

#include "qproof/channel.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>
#include <vector>

#include "qproof/errors.hpp"

namespace qproof {
namespace {

using Clock = std::chrono::steady_clock;

// --- in-process ------------------------------------------------------------

struct Mailbox {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<std::uint8_t>> frames;
  bool closed = false;
};

class InProcessChannel final : public Channel {
 public:
  InProcessChannel(std::shared_ptr<Mailbox> inbox, std::shared_ptr<Mailbox> outbox,
                   std::chrono::milliseconds timeout)
      : inbox_(std::move(inbox)), outbox_(std::move(outbox)), timeout_(timeout) {}

  ~InProcessChannel() override {
    for (auto* box : {inbox_.get(), outbox_.get()}) {
      std::lock_guard lock(box->mu);
      box->closed = true;
      box->cv.notify_all();
    }
  }

  void send(const Message& m) override {
    auto frame = encode(m);
    std::lock_guard lock(outbox_->mu);
    if (outbox_->closed) throw TransportError("peer closed the in-process channel");
    outbox_->frames.push_back(std::move(frame));
    outbox_->cv.notify_all();
  }

  Message receive() override {
    std::unique_lock lock(inbox_->mu);
    if (!inbox_->cv.wait_for(lock, timeout_,
                             [&] { return !inbox_->frames.empty() || inbox_->closed; })) {
      throw TransportError("receive timed out");
    }
    if (inbox_->frames.empty()) throw TransportError("peer closed the in-process channel");
    auto frame = std::move(inbox_->frames.front());
    inbox_->frames.pop_front();
    lock.unlock();
    return decode(frame);
  }

 private:
  std::shared_ptr<Mailbox> inbox_;
  std::shared_ptr<Mailbox> outbox_;
  std::chrono::milliseconds timeout_;
};

// --- sockets ----------------------------------------------------------------

std::pair<std::string, std::string> split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon + 1 == address.size()) {
    throw ConfigurationError("address must look like host:port, got '" + address + "'");
  }
  const std::string port = address.substr(colon + 1);
  unsigned value = 0;
  const auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc{} || end != port.data() + port.size() || value > 65535) {
    throw ConfigurationError("bad port in address '" + address + "'");
  }
  std::string host = address.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  return {host.empty() ? "127.0.0.1" : host, port};
}

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) freeaddrinfo(head);
  }
};

void resolve(const std::string& address, bool passive, AddrInfo& out) {
  const auto [host, port] = split_address(address);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = passive ? AI_PASSIVE : 0;
  if (int rc = getaddrinfo(host.c_str(), port.c_str(), &hints, &out.head); rc != 0) {
    throw TransportError("cannot resolve '" + address + "': " + gai_strerror(rc));
  }
}

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

// Waits for `events` on fd until the deadline.
void wait_for(int fd, short events, Clock::time_point deadline, const char* what) {
  for (;;) {
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (remaining <= 0) throw TransportError(std::string(what) + " timed out");
    pollfd p{fd, events, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(remaining));
    if (rc > 0) return;
    if (rc < 0 && errno != EINTR) throw TransportError(errno_text("poll"));
  }
}

class SocketChannel final : public Channel {
 public:
  SocketChannel(int fd, std::chrono::milliseconds timeout) : fd_(fd), timeout_(timeout) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~SocketChannel() override { ::close(fd_); }

  void send(const Message& m) override {
    const auto frame = encode(m);
    const auto deadline = Clock::now() + timeout_;
    std::size_t sent = 0;
    while (sent < frame.size()) {
      wait_for(fd_, POLLOUT, deadline, "send");
      const ssize_t rc = ::send(fd_, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
      if (rc < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw TransportError(errno_text("send"));
      }
      sent += static_cast<std::size_t>(rc);
    }
  }

  Message receive() override {
    const auto deadline = Clock::now() + timeout_;
    std::vector<std::uint8_t> frame(kFrameHeader);
    read_exact(frame.data(), kFrameHeader, deadline);
    const std::size_t len = (std::size_t{frame[0]} << 24) | (std::size_t{frame[1]} << 16) |
                            (std::size_t{frame[2]} << 8) | std::size_t{frame[3]};
    if (len > kMaxFrameBody) throw DecodeError("declared frame length exceeds 1 MiB", 0);
    frame.resize(kFrameHeader + len);
    read_exact(frame.data() + kFrameHeader, len, deadline);
    return decode(frame);
  }

 private:
  void read_exact(std::uint8_t* out, std::size_t count, Clock::time_point deadline) {
    std::size_t got = 0;
    while (got < count) {
      wait_for(fd_, POLLIN, deadline, "receive");
      const ssize_t rc = ::recv(fd_, out + got, count - got, 0);
      if (rc == 0) throw TransportError("peer closed the connection");
      if (rc < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw TransportError(errno_text("recv"));
      }
      got += static_cast<std::size_t>(rc);
    }
  }

  int fd_;
  std::chrono::milliseconds timeout_;
};

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> in_process(
    std::chrono::milliseconds timeout) {
  auto a_to_b = std::make_shared<Mailbox>();
  auto b_to_a = std::make_shared<Mailbox>();
  return {std::make_unique<InProcessChannel>(b_to_a, a_to_b, timeout),
          std::make_unique<InProcessChannel>(a_to_b, b_to_a, timeout)};
}

SocketListener SocketListener::listen(const std::string& address,
                                      std::chrono::milliseconds timeout) {
  AddrInfo info;
  resolve(address, true, info);
  for (addrinfo* ai = info.head; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      sockaddr_storage bound{};
      socklen_t len = sizeof(bound);
      ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
      const std::uint16_t port =
          bound.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
      return SocketListener(fd, port, timeout);
    }
    ::close(fd);
  }
  throw TransportError(errno_text(("cannot listen on " + address).c_str()));
}

SocketListener::SocketListener(SocketListener&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), port_(other.port_), timeout_(other.timeout_) {}

SocketListener& SocketListener::operator=(SocketListener&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    port_ = other.port_;
    timeout_ = other.timeout_;
  }
  return *this;
}

SocketListener::~SocketListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Channel> SocketListener::accept() {
  wait_for(fd_, POLLIN, Clock::now() + timeout_, "accept");
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) throw TransportError(errno_text("accept"));
  return std::make_unique<SocketChannel>(fd, timeout_);
}

std::unique_ptr<Channel> socket_connect(const std::string& address,
                                        std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  AddrInfo info;
  resolve(address, false, info);
  for (;;) {
    for (addrinfo* ai = info.head; ai != nullptr; ai = ai->ai_next) {
      const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        return std::make_unique<SocketChannel>(fd, timeout);
      }
      ::close(fd);
    }
    if (Clock::now() >= deadline) throw TransportError("cannot connect to " + address);
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

}  // namespace qproof
