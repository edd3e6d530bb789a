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

#include "streamlda/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace streamlda {

namespace {

void check_word(const GlobalStats& stats, WordId v) {
  if (v >= stats.vocab_size()) {
    throw std::out_of_range("word " + std::to_string(v) + " outside vocabulary of size " +
                            std::to_string(stats.vocab_size()));
  }
}

void check_dimensions(const GlobalStats& stats, const Hyper& hyper) {
  if (stats.num_topics() != hyper.num_topics || stats.vocab_size() != hyper.vocab_size) {
    throw std::invalid_argument("stats dimensions do not match hyperparameters");
  }
}

}  // namespace

std::vector<double> conditional_probs(const GlobalStats& stats, const DocState& doc, WordId v,
                                      const Hyper& hyper, std::optional<TopicId> exclude) {
  check_word(stats, v);
  const std::size_t K = stats.num_topics();
  const double vb = static_cast<double>(stats.vocab_size()) * hyper.beta;
  std::vector<double> p(K);
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const auto topic = static_cast<TopicId>(k);
    double ndk = doc.ndk[k];
    double nkv = stats.count(topic, v);
    double nk = stats.topic_total(topic);
    if (exclude && *exclude == topic) {
      ndk -= 1.0;
      nkv -= 1.0;
      nk -= 1.0;
    }
    p[k] = (ndk + hyper.alpha) * (nkv + hyper.beta) / (nk + vb);
    total += p[k];
  }
  if (!std::isfinite(total) || !(total > 0.0)) {
    throw std::runtime_error("conditional_probs: non-finite or zero mass (corrupted counts)");
  }
  for (double& x : p) {
    if (!(x >= 0.0)) throw std::runtime_error("conditional_probs: negative weight");
    x /= total;
  }
  return p;
}

GibbsSampler::GibbsSampler(const Hyper& hyper)
    : hyper_(hyper),
      vocab_beta_(static_cast<double>(hyper.vocab_size) * hyper.beta),
      cumulative_(hyper.num_topics) {
  hyper_.validate();
}

TopicId GibbsSampler::draw(const GlobalStats& stats, const DocState& state, WordId v, Rng& rng) {
  const std::size_t K = cumulative_.size();
  double running = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const auto topic = static_cast<TopicId>(k);
    running += (state.ndk[k] + hyper_.alpha) * (stats.count(topic, v) + hyper_.beta) /
               (stats.topic_total(topic) + vocab_beta_);
    cumulative_[k] = running;
  }
  if (!std::isfinite(running) || !(running > 0.0)) {
    throw std::runtime_error("sampler: non-finite conditional (corrupted counts)");
  }
  return static_cast<TopicId>(sample_cumulative(cumulative_, rng));
}

TopicId GibbsSampler::resample_token(GlobalStats& stats, DocState& state, const Document& doc,
                                     std::size_t position, Rng& rng) {
  const WordId v = doc.tokens[position];
  const TopicId old_topic = state.assignments[position];
  remove_token(stats, state, old_topic, v);
  const TopicId new_topic = draw(stats, state, v, rng);
  add_token(stats, state, new_topic, v);
  state.assignments[position] = new_topic;
  return new_topic;
}

BatchState GibbsSampler::progressive_init(GlobalStats& stats, const MiniBatch& batch, Rng& rng) {
  check_dimensions(stats, hyper_);
  BatchState state;
  state.docs.reserve(batch.docs.size());
  for (const auto& doc : batch.docs) {
    DocState ds(hyper_.num_topics);
    ds.assignments.reserve(doc.length());
    for (WordId v : doc.tokens) {
      check_word(stats, v);
      const TopicId k = draw(stats, ds, v, rng);
      add_token(stats, ds, k, v);
      ds.assignments.push_back(k);
    }
    state.docs.push_back(std::move(ds));
  }
  return state;
}

void GibbsSampler::sweep(GlobalStats& stats, BatchState& state, const MiniBatch& batch, Rng& rng) {
  if (state.docs.size() != batch.docs.size()) {
    throw std::invalid_argument("sweep: batch state does not match batch");
  }
  for (std::size_t d = 0; d < batch.docs.size(); ++d) {
    const Document& doc = batch.docs[d];
    DocState& ds = state.docs[d];
    for (std::size_t i = 0; i < doc.length(); ++i) resample_token(stats, ds, doc, i, rng);
  }
}

CgsResult run_cgs(const Corpus& corpus, std::size_t n_iters, const Hyper& hyper, Rng& rng) {
  if (n_iters < 1) throw std::invalid_argument("run_cgs: n_iters must be >= 1");
  GibbsSampler sampler(hyper);
  GlobalStats stats = new_stats(hyper);
  MiniBatch all;
  all.index = 1;
  all.docs = corpus.documents;
  BatchState state = sampler.progressive_init(stats, all, rng);
  for (std::size_t it = 1; it < n_iters; ++it) sampler.sweep(stats, state, all, rng);
  return {std::move(stats), std::move(state)};
}

}  // namespace streamlda
