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

#include "streamlda/streaming.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace streamlda {

void StreamConfig::validate() const {
  hyper.validate();
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(decay > 0.0 && decay <= 1.0)) throw std::invalid_argument("decay must lie in (0, 1]");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (patience && *patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (!(min_relative_improvement >= 0.0)) {
    throw std::invalid_argument("min_relative_improvement must be >= 0");
  }
}

ConvergenceTracker::ConvergenceTracker(std::size_t max_iters, std::optional<std::size_t> patience,
                                       double min_relative_improvement)
    : max_iters_(max_iters),
      patience_(patience),
      min_relative_improvement_(min_relative_improvement),
      best_(std::numeric_limits<double>::infinity()) {
  if (max_iters_ < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (patience_ && *patience_ < 1) throw std::invalid_argument("patience must be >= 1");
}

bool ConvergenceTracker::record(double perplexity) {
  ++iterations_;
  if (perplexity < best_ * (1.0 - min_relative_improvement_)) {
    best_ = perplexity;
    stalled_ = 0;
  } else {
    ++stalled_;
  }
  if (iterations_ >= max_iters_) return true;
  return patience_ && stalled_ >= *patience_;
}

double train_perplexity(const GlobalStats& stats, const BatchState& state, const MiniBatch& batch,
                        const Hyper& hyper) {
  if (state.docs.size() != batch.docs.size()) {
    throw std::invalid_argument("train_perplexity: batch state does not match batch");
  }
  const std::size_t K = stats.num_topics();
  const double vb = static_cast<double>(stats.vocab_size()) * hyper.beta;
  const double ka = static_cast<double>(K) * hyper.alpha;
  std::vector<double> inv_denominator(K);
  for (std::size_t k = 0; k < K; ++k) {
    inv_denominator[k] = 1.0 / (stats.topic_total(static_cast<TopicId>(k)) + vb);
  }

  double log_likelihood = 0.0;
  std::size_t tokens = 0;
  std::vector<double> theta(K);
  for (std::size_t d = 0; d < batch.docs.size(); ++d) {
    const DocState& ds = state.docs[d];
    const double doc_denominator = static_cast<double>(ds.nd) + ka;
    for (std::size_t k = 0; k < K; ++k) theta[k] = (ds.ndk[k] + hyper.alpha) / doc_denominator;
    for (WordId v : batch.docs[d].tokens) {
      double p = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        p += theta[k] * (stats.count(static_cast<TopicId>(k), v) + hyper.beta) * inv_denominator[k];
      }
      log_likelihood += std::log(p);
      ++tokens;
    }
  }
  if (tokens == 0) throw std::invalid_argument("train_perplexity: batch has no tokens");
  return std::exp(-log_likelihood / static_cast<double>(tokens));
}

BatchReport process_minibatch(GlobalStats& stats, const MiniBatch& batch,
                              const StreamConfig& config, Rng& rng) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  BatchReport report;
  report.batch_index = batch.index;
  report.num_docs = batch.docs.size();
  report.num_tokens = batch.num_tokens();

  GibbsSampler sampler(config.hyper);
  ConvergenceTracker tracker(config.max_iters, config.patience, config.min_relative_improvement);
  {
    BatchState state = sampler.progressive_init(stats, batch, rng);
    report.resident_docs = state.docs.size();
    const bool has_tokens = report.num_tokens > 0;
    bool stop = false;
    while (!stop) {
      if (tracker.iterations() > 0) sampler.sweep(stats, state, batch, rng);
      if (has_tokens) {
        const double perplexity = train_perplexity(stats, state, batch, config.hyper);
        report.train_perplexity.push_back(perplexity);
        stop = tracker.record(perplexity);
      } else {
        stop = true;
      }
    }
    report.iterations = has_tokens ? tracker.iterations() : 1;
    report.theta.reserve(state.docs.size());
    for (const auto& ds : state.docs) report.theta.push_back(theta_mean(ds, config.hyper));
  }
  stats.apply_decay(config.decay);
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

GlobalStats run_sgs(const BatchSource& stream, const StreamConfig& config, Rng& rng,
                    const ReportSink& sink, const BatchEvaluator& evaluator) {
  config.validate();
  return run_sgs(new_stats(config.hyper), stream, config, rng, sink, evaluator);
}

GlobalStats run_sgs(GlobalStats stats, const BatchSource& stream, const StreamConfig& config,
                    Rng& rng, const ReportSink& sink, const BatchEvaluator& evaluator) {
  config.validate();
  while (auto batch = stream()) {
    BatchReport report = process_minibatch(stats, *batch, config, rng);
    if (evaluator) report.heldout_perplexity = evaluator(*batch, stats);
    if (sink) sink(report, stats);
  }
  return stats;
}

}  // namespace streamlda
