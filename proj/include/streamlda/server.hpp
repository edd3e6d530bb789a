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

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <thread>
#include <vector>

#include "streamlda/net.hpp"
#include "streamlda/stats.hpp"
#include "streamlda/wire.hpp"

namespace streamlda {

/// Holds the global topic-word counts. A push merges
/// N_kv <- lambda * (N_kv + delta) under an exclusive lock; fetches take a
/// shared lock, so every snapshot reflects a prefix of the push order.
class ParameterServer {
 public:
  ParameterServer(const Hyper& hyper, double lambda, bool record_pushes = false);

  wire::Snapshot fetch() const;

  /// Applies the delta; false (nothing applied) when a triple is outside
  /// K x V or would drive a count negative.
  bool push(const SparseDelta& delta);

  /// FETCH -> SNAPSHOT, PUSH -> ACK. Throws ProtocolError for other messages.
  wire::Message handle(const wire::Message& request);

  GlobalStats stats() const;
  std::size_t merge_count() const;
  double lambda() const { return lambda_; }
  const Hyper& hyper() const { return hyper_; }

  /// Applied pushes in merge order; empty unless recording was enabled.
  std::vector<SparseDelta> push_log() const;

  /// Blocks until at least `n` pushes have been applied.
  void wait_for_merges(std::size_t n) const;

 private:
  Hyper hyper_;
  double lambda_;
  bool record_pushes_;
  mutable std::shared_mutex mu_;
  GlobalStats stats_;
  std::size_t merges_ = 0;
  std::vector<SparseDelta> log_;
  mutable std::mutex wait_mu_;
  mutable std::condition_variable merged_;
};

/// Replays a push sequence through merge_delta on fresh stats.
GlobalStats replay_pushes(const Hyper& hyper, double lambda, const std::vector<SparseDelta>& log);

/// Serves a ParameterServer over TCP, one thread per connection.
class TcpServer {
 public:
  TcpServer(ParameterServer& server, const net::Endpoint& bind);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }

  /// Closes the listener and every open connection, then joins threads.
  void stop();

 private:
  void accept_loop();
  void serve_connection(const std::shared_ptr<net::Socket>& socket);

  ParameterServer& server_;
  net::Socket listener_;
  std::uint16_t port_;
  std::atomic<bool> stopping_{false};
  std::mutex mu_;
  std::vector<std::shared_ptr<net::Socket>> connections_;
  std::vector<std::thread> handlers_;
  std::thread acceptor_;
};

}  // namespace streamlda
