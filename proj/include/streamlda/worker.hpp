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

#include <chrono>
#include <cstddef>
#include <functional>
#include <string>

#include "streamlda/corpus.hpp"
#include "streamlda/net.hpp"
#include "streamlda/random.hpp"
#include "streamlda/streaming.hpp"

namespace streamlda {

/// Client side of the parameter-server protocol. Each call reconnects on
/// failure with exponential backoff, up to `max_attempts` tries.
class ServerClient {
 public:
  explicit ServerClient(net::Endpoint endpoint, std::size_t max_attempts = 3,
                        std::chrono::milliseconds initial_backoff = std::chrono::milliseconds(50));

  wire::Snapshot fetch();
  bool push(const SparseDelta& delta);

 private:
  wire::Message call(const wire::Message& request);

  net::Endpoint endpoint_;
  std::size_t max_attempts_;
  std::chrono::milliseconds initial_backoff_;
  net::Socket socket_;
};

struct WorkerSummary {
  std::size_t batches_pushed = 0;
  std::size_t batches_failed = 0;
  std::size_t tokens = 0;
  double seconds = 0.0;
};

/// Called for batches abandoned after the retries are exhausted.
using WorkerErrorSink = std::function<void(std::size_t batch_index, const std::string& error)>;

/// For each mini-batch: fetch a snapshot, run process_minibatch on a local
/// copy without decay, push delta_between(snapshot, local). The server
/// applies the decay. `config.hyper` must match the server's K and V.
WorkerSummary worker_run(const net::Endpoint& server, const BatchSource& stream,
                         const StreamConfig& config, Rng& rng, const ReportSink& sink = {},
                         const WorkerErrorSink& on_error = {});

}  // namespace streamlda
