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

#include <cstddef>
#include <vector>

#include "streamlda/corpus.hpp"
#include "streamlda/server.hpp"
#include "streamlda/streaming.hpp"
#include "streamlda/worker.hpp"

namespace streamlda {

struct LocalDsgsResult {
  GlobalStats stats;
  std::vector<SparseDelta> push_log;  // merge order
  std::vector<WorkerSummary> workers;
  std::size_t tokens = 0;
  double seconds = 0.0;

  double tokens_per_sec() const { return seconds > 0.0 ? static_cast<double>(tokens) / seconds : 0.0; }
};

/// Starts a parameter server on a loopback port and one worker thread per
/// shard, each streaming its shard in batches of config.batch_size. Worker 0
/// uses config.seed, worker i > 0 uses derive_seed(config.seed, i).
/// config.decay is the server's lambda.
LocalDsgsResult run_local_dsgs(const std::vector<Corpus>& shards, const StreamConfig& config,
                               bool record_pushes = true);

/// Splits documents into `parts` contiguous shards of near-equal size.
std::vector<Corpus> shard_corpus(const Corpus& corpus, std::size_t parts);

}  // namespace streamlda
