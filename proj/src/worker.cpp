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

#include "streamlda/worker.hpp"

#include <iostream>
#include <stdexcept>
#include <thread>

namespace streamlda {

ServerClient::ServerClient(net::Endpoint endpoint, std::size_t max_attempts,
                           std::chrono::milliseconds initial_backoff)
    : endpoint_(std::move(endpoint)), max_attempts_(max_attempts), initial_backoff_(initial_backoff) {
  if (max_attempts_ < 1) throw std::invalid_argument("max_attempts must be >= 1");
}

wire::Message ServerClient::call(const wire::Message& request) {
  auto backoff = initial_backoff_;
  std::string last_error;
  for (std::size_t attempt = 0; attempt < max_attempts_; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    try {
      if (!socket_.valid()) socket_ = net::connect_to(endpoint_);
      net::send_message(socket_, request);
      auto reply = net::receive_message(socket_);
      if (!reply) throw std::runtime_error("server closed the connection");
      return std::move(*reply);
    } catch (const std::exception& e) {
      last_error = e.what();
      socket_.close();
    }
  }
  throw std::runtime_error("server " + endpoint_.to_string() + " unreachable after " +
                           std::to_string(max_attempts_) + " attempts: " + last_error);
}

wire::Snapshot ServerClient::fetch() {
  auto reply = call(wire::Fetch{});
  auto* snapshot = std::get_if<wire::Snapshot>(&reply);
  if (!snapshot) throw ProtocolError("expected SNAPSHOT in reply to FETCH");
  return std::move(*snapshot);
}

bool ServerClient::push(const SparseDelta& delta) {
  const auto reply = call(wire::Push{delta});
  const auto* ack = std::get_if<wire::Ack>(&reply);
  if (!ack) throw ProtocolError("expected ACK in reply to PUSH");
  return ack->applied;
}

WorkerSummary worker_run(const net::Endpoint& server, const BatchSource& stream,
                         const StreamConfig& config, Rng& rng, const ReportSink& sink,
                         const WorkerErrorSink& on_error) {
  StreamConfig local = config;
  local.decay = 1.0;
  local.validate();

  ServerClient client(server);
  WorkerSummary summary;
  const auto start = std::chrono::steady_clock::now();
  while (auto batch = stream()) {
    try {
      const wire::Snapshot snap = client.fetch();
      if (snap.num_topics != local.hyper.num_topics || snap.vocab_size != local.hyper.vocab_size) {
        throw std::invalid_argument("server dimensions " + std::to_string(snap.num_topics) + "x" +
                                    std::to_string(snap.vocab_size) +
                                    " differ from worker configuration");
      }
      const GlobalStats before =
          GlobalStats::from_entries(snap.num_topics, snap.vocab_size, snap.entries);
      GlobalStats after = before;
      const BatchReport report = process_minibatch(after, *batch, local, rng);
      if (!client.push(delta_between(before, after))) {
        throw std::runtime_error("server rejected the push");
      }
      ++summary.batches_pushed;
      summary.tokens += report.num_tokens;
      if (sink) sink(report, after);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      ++summary.batches_failed;
      if (on_error) {
        on_error(batch->index, e.what());
      } else {
        std::cerr << "worker: batch " << batch->index << " aborted: " << e.what() << '\n';
      }
    }
  }
  summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

}  // namespace streamlda
