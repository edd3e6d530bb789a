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

#include "streamlda/dsgs.hpp"

#include <chrono>
#include <exception>
#include <stdexcept>
#include <thread>

namespace streamlda {

LocalDsgsResult run_local_dsgs(const std::vector<Corpus>& shards, const StreamConfig& config,
                               bool record_pushes) {
  config.validate();
  if (shards.empty()) throw std::invalid_argument("run_local_dsgs: no shards");
  ParameterServer server(config.hyper, config.decay, record_pushes);
  TcpServer tcp(server, net::Endpoint{"127.0.0.1", 0});
  const net::Endpoint endpoint{"127.0.0.1", tcp.port()};

  LocalDsgsResult result{new_stats(config.hyper), {}, {}};
  result.workers.resize(shards.size());
  std::vector<std::exception_ptr> errors(shards.size());
  const auto start = std::chrono::steady_clock::now();
  {
    std::vector<std::jthread> threads;
    for (std::size_t i = 0; i < shards.size(); ++i) {
      threads.emplace_back([&, i] {
        try {
          Rng rng(i == 0 ? config.seed : derive_seed(config.seed, i));
          result.workers[i] =
              worker_run(endpoint, batch_source(shards[i], config.batch_size), config, rng);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  tcp.stop();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& w : result.workers) result.tokens += w.tokens;
  result.stats = server.stats();
  result.push_log = server.push_log();
  return result;
}

std::vector<Corpus> shard_corpus(const Corpus& corpus, std::size_t parts) {
  if (parts < 1) throw std::invalid_argument("shard_corpus: parts must be >= 1");
  std::vector<Corpus> shards(parts);
  const std::size_t n = corpus.num_docs();
  for (std::size_t p = 0; p < parts; ++p) {
    shards[p].vocab = corpus.vocab;
    const std::size_t begin = n * p / parts;
    const std::size_t end = n * (p + 1) / parts;
    shards[p].documents.assign(corpus.documents.begin() + static_cast<std::ptrdiff_t>(begin),
                               corpus.documents.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return shards;
}

}  // namespace streamlda
