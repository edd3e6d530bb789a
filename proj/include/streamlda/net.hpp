// Copyright 2026 The streamlda Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "streamlda/wire.hpp"

namespace streamlda::net {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  std::string to_string() const { return host + ":" + std::to_string(port); }
};

/// Parses "host:port". Throws std::invalid_argument.
Endpoint parse_endpoint(const std::string& address);

/// Owning TCP socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }

  /// Wakes any thread blocked on this socket without releasing the fd.
  void shutdown();
  void close();

 private:
  int fd_ = -1;
};

Socket connect_to(const Endpoint& endpoint);

/// Listening socket bound to the endpoint (port 0 picks a free port).
Socket listen_on(const Endpoint& endpoint, int backlog = 64);
std::uint16_t local_port(const Socket& socket);

/// Blocking accept; nullopt once the listening socket is shut down.
std::optional<Socket> accept_from(const Socket& listener);

void send_message(const Socket& socket, const wire::Message& message);

/// Reads one whole frame. nullopt on a clean close before the first byte;
/// throws std::runtime_error on I/O failure and ProtocolError on bad frames.
std::optional<wire::Message> receive_message(const Socket& socket);

}  // namespace streamlda::net
