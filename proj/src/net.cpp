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

#include "streamlda/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "streamlda/common.hpp"

namespace streamlda::net {

namespace {

std::runtime_error os_error(const std::string& what) {
  return std::runtime_error(what + ": " + std::strerror(errno));
}

sockaddr_in resolve(const Endpoint& endpoint) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  const std::string host = endpoint.host.empty() ? "0.0.0.0" : endpoint.host;
  const int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &result);
  if (rc != 0 || result == nullptr) {
    throw std::runtime_error("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  sockaddr_in addr{};
  std::memcpy(&addr, result->ai_addr, sizeof(addr));
  ::freeaddrinfo(result);
  addr.sin_port = htons(endpoint.port);
  return addr;
}

// Returns false on a clean EOF before any byte was read.
bool read_exact(int fd, std::uint8_t* data, std::size_t size, bool allow_eof) {
  std::size_t done = 0;
  while (done < size) {
    const ssize_t n = ::recv(fd, data + done, size - done, 0);
    if (n == 0) {
      if (done == 0 && allow_eof) return false;
      throw ProtocolError("truncated frame: connection closed mid-message");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw os_error("recv");
    }
    done += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

Endpoint parse_endpoint(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("address must be host:port: " + address);
  Endpoint e;
  e.host = address.substr(0, colon);
  const std::string port = address.substr(colon + 1);
  try {
    std::size_t used = 0;
    const unsigned long p = std::stoul(port, &used);
    if (used != port.size() || p > 65535) throw std::invalid_argument("bad port");
    e.port = static_cast<std::uint16_t>(p);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad port in address: " + address);
  }
  return e;
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

Socket::~Socket() { close(); }

void Socket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Socket connect_to(const Endpoint& endpoint) {
  const sockaddr_in addr = resolve(endpoint);
  Socket s(::socket(AF_INET, SOCK_STREAM, 0));
  if (!s.valid()) throw os_error("socket");
  if (::connect(s.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw os_error("connect to " + endpoint.to_string());
  }
  const int one = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return s;
}

Socket listen_on(const Endpoint& endpoint, int backlog) {
  const sockaddr_in addr = resolve(endpoint);
  Socket s(::socket(AF_INET, SOCK_STREAM, 0));
  if (!s.valid()) throw os_error("socket");
  const int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(s.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw os_error("bind " + endpoint.to_string());
  }
  if (::listen(s.fd(), backlog) != 0) throw os_error("listen");
  return s;
}

std::uint16_t local_port(const Socket& socket) {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(socket.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    throw os_error("getsockname");
  }
  return ntohs(addr.sin_port);
}

std::optional<Socket> accept_from(const Socket& listener) {
  while (true) {
    const int fd = ::accept(listener.fd(), nullptr, nullptr);
    if (fd >= 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return Socket(fd);
    }
    if (errno == EINTR || errno == ECONNABORTED) continue;
    return std::nullopt;
  }
}

void send_message(const Socket& socket, const wire::Message& message) {
  const auto bytes = wire::encode(message);
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::send(socket.fd(), bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw os_error("send");
    }
    done += static_cast<std::size_t>(n);
  }
}

std::optional<wire::Message> receive_message(const Socket& socket) {
  std::vector<std::uint8_t> frame(wire::kLengthBytes);
  if (!read_exact(socket.fd(), frame.data(), wire::kLengthBytes, true)) return std::nullopt;
  const std::uint32_t length = *wire::peek_length(frame);
  if (length < 1 || length > wire::kMaxFrameLength) {
    throw ProtocolError("bad frame length " + std::to_string(length));
  }
  frame.resize(wire::kLengthBytes + length);
  read_exact(socket.fd(), frame.data() + wire::kLengthBytes, length, false);
  return wire::decode(frame);
}

}  // namespace streamlda::net
