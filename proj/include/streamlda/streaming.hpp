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
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "streamlda/corpus.hpp"
#include "streamlda/random.hpp"
#include "streamlda/sampler.hpp"
#include "streamlda/stats.hpp"

namespace streamlda {

struct StreamConfig {
  Hyper hyper;
  std::size_t batch_size = 100;
  double decay = 1.0;
  std::size_t max_iters = 400;
  // nullopt disables early stopping; the batch then runs exactly max_iters.
  std::optional<std::size_t> patience = 10;
  // An iteration counts as improving only if it beats the best perplexity so
  // far by this relative margin.
  double min_relative_improvement = 1e-6;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Stopping rule for the per-batch loop: keep the best training perplexity,
/// stop after `patience` consecutive iterations that do not improve it, or
/// after `max_iters` iterations.
class ConvergenceTracker {
 public:
  ConvergenceTracker(std::size_t max_iters, std::optional<std::size_t> patience,
                     double min_relative_improvement = 1e-6);

  /// Records one iteration's perplexity; returns true when the loop should stop.
  bool record(double perplexity);

  std::size_t iterations() const { return iterations_; }
  std::size_t stalled() const { return stalled_; }
  double best() const { return best_; }

 private:
  std::size_t max_iters_;
  std::optional<std::size_t> patience_;
  double min_relative_improvement_;
  std::size_t iterations_ = 0;
  std::size_t stalled_ = 0;
  double best_;
};

struct BatchReport {
  std::size_t batch_index = 0;
  std::size_t iterations = 0;
  std::vector<double> train_perplexity;  // one per iteration
  double wall_ms = 0.0;
  std::size_t num_docs = 0;
  std::size_t num_tokens = 0;
  // Peak number of document states the driver held for this batch.
  std::size_t resident_docs = 0;
  std::optional<double> heldout_perplexity;
  // Posterior-mean theta of every document in the batch, computed at batch end.
  std::vector<std::vector<double>> theta;

  double final_train_perplexity() const {
    return train_perplexity.empty() ? 0.0 : train_perplexity.back();
  }
  double tokens_per_sec() const {
    return wall_ms > 0.0 ? static_cast<double>(num_tokens) * 1000.0 / wall_ms : 0.0;
  }
};

/// Perplexity of the batch's own tokens under phi_mean and each document's
/// current theta_mean. Throws when the batch holds no tokens.
double train_perplexity(const GlobalStats& stats, const BatchState& state, const MiniBatch& batch,
                        const Hyper& hyper);

/// Progressive init, sweeps until the stopping rule fires, then decay.
/// Document states are dropped before returning.
BatchReport process_minibatch(GlobalStats& stats, const MiniBatch& batch,
                              const StreamConfig& config, Rng& rng);

/// Called after each batch with the report and the post-decay stats.
using ReportSink = std::function<void(const BatchReport&, const GlobalStats&)>;

/// Optional held-out scorer run after each batch; its value lands in the
/// report before the sink sees it.
using BatchEvaluator = std::function<std::optional<double>(const MiniBatch&, const GlobalStats&)>;

GlobalStats run_sgs(const BatchSource& stream, const StreamConfig& config, Rng& rng,
                    const ReportSink& sink = {}, const BatchEvaluator& evaluator = {});

/// Variant that continues from existing stats.
GlobalStats run_sgs(GlobalStats stats, const BatchSource& stream, const StreamConfig& config,
                    Rng& rng, const ReportSink& sink = {}, const BatchEvaluator& evaluator = {});

}  // namespace streamlda
