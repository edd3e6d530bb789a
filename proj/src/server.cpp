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

#include "streamlda/server.hpp"

#include <iostream>
#include <stdexcept>

#include "streamlda/common.hpp"

namespace streamlda {

ParameterServer::ParameterServer(const Hyper& hyper, double lambda, bool record_pushes)
    : hyper_(hyper), lambda_(lambda), record_pushes_(record_pushes), stats_(new_stats(hyper)) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("decay must lie in (0, 1]");
}

wire::Snapshot ParameterServer::fetch() const {
  std::shared_lock lock(mu_);
  wire::Snapshot s;
  s.num_topics = static_cast<std::uint32_t>(stats_.num_topics());
  s.vocab_size = static_cast<std::uint32_t>(stats_.vocab_size());
  s.lambda = lambda_;
  s.entries = stats_.entries();
  return s;
}

bool ParameterServer::push(const SparseDelta& delta) {
  for (const auto& e : delta) {
    if (e.topic >= hyper_.num_topics || e.word >= hyper_.vocab_size) return false;
  }
  {
    std::unique_lock lock(mu_);
    try {
      stats_.merge_delta(delta, lambda_);
    } catch (const std::exception& e) {
      std::cerr << "server: rejected push: " << e.what() << '\n';
      return false;
    }
    ++merges_;
    if (record_pushes_) log_.push_back(delta);
  }
  {
    std::lock_guard lock(wait_mu_);
  }
  merged_.notify_all();
  return true;
}

wire::Message ParameterServer::handle(const wire::Message& request) {
  if (std::holds_alternative<wire::Fetch>(request)) return fetch();
  if (const auto* p = std::get_if<wire::Push>(&request)) return wire::Ack{push(p->entries)};
  throw ProtocolError("server accepts only FETCH and PUSH");
}

GlobalStats ParameterServer::stats() const {
  std::shared_lock lock(mu_);
  return stats_;
}

std::size_t ParameterServer::merge_count() const {
  std::shared_lock lock(mu_);
  return merges_;
}

std::vector<SparseDelta> ParameterServer::push_log() const {
  std::shared_lock lock(mu_);
  return log_;
}

void ParameterServer::wait_for_merges(std::size_t n) const {
  std::unique_lock lock(wait_mu_);
  merged_.wait(lock, [&] { return merge_count() >= n; });
}

GlobalStats replay_pushes(const Hyper& hyper, double lambda, const std::vector<SparseDelta>& log) {
  GlobalStats stats = new_stats(hyper);
  for (const auto& delta : log) stats.merge_delta(delta, lambda);
  return stats;
}

TcpServer::TcpServer(ParameterServer& server, const net::Endpoint& bind)
    : server_(server), listener_(net::listen_on(bind)), port_(net::local_port(listener_)) {
  acceptor_ = std::thread([this] { accept_loop(); });
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::stop() {
  if (stopping_.exchange(true)) return;
  listener_.shutdown();
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> handlers;
  {
    std::lock_guard lock(mu_);
    for (auto& c : connections_) c->shutdown();
    handlers.swap(handlers_);
  }
  for (auto& t : handlers) t.join();
  listener_.close();
}

void TcpServer::accept_loop() {
  while (!stopping_) {
    auto accepted = net::accept_from(listener_);
    if (!accepted) break;
    auto socket = std::make_shared<net::Socket>(std::move(*accepted));
    std::lock_guard lock(mu_);
    if (stopping_) break;
    connections_.push_back(socket);
    handlers_.emplace_back([this, socket] { serve_connection(socket); });
  }
}

void TcpServer::serve_connection(const std::shared_ptr<net::Socket>& socket) {
  try {
    while (auto request = net::receive_message(*socket)) {
      net::send_message(*socket, server_.handle(*request));
    }
  } catch (const ProtocolError& e) {
    std::cerr << "server: closing connection on malformed frame: " << e.what() << '\n';
  } catch (const std::exception& e) {
    if (!stopping_) std::cerr << "server: connection error: " << e.what() << '\n';
  }
  socket->shutdown();
}

}  // namespace streamlda
