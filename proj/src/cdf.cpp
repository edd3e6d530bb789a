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

#include "streamlda/cdf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace streamlda {

namespace {

// Dirichlet draws with tiny concentrations can underflow to exact zeros;
// floor them at the smallest normal double so every word keeps support.
void resample_phi_row(CdfState& state, const Hyper& hyper, TopicId k, Rng& rng,
                      std::vector<double>& concentration) {
  std::fill(concentration.begin(), concentration.end(), hyper.beta);
  for (const auto& [v, c] : state.nkv_hat.row(k)) concentration[v] += c;
  const auto draw = sample_dirichlet(concentration, rng);
  auto row = state.phi.row(k);
  for (std::size_t v = 0; v < draw.size(); ++v) {
    row[v] = std::max(draw[v], std::numeric_limits<double>::min());
  }
}

TopicId draw_topic(const CdfState& state, const DocState& ds, WordId v, const Hyper& hyper,
                   std::vector<double>& cumulative, Rng& rng) {
  double running = 0.0;
  for (std::size_t k = 0; k < cumulative.size(); ++k) {
    running += (ds.ndk[k] + hyper.alpha) * state.phi(static_cast<TopicId>(k), v);
    cumulative[k] = running;
  }
  if (!(running > 0.0) || !std::isfinite(running)) {
    throw std::runtime_error("cdf: degenerate conditional");
  }
  return static_cast<TopicId>(sample_cumulative(cumulative, rng));
}

}  // namespace

CdfState cdf_init(const Hyper& hyper, Rng& rng) {
  hyper.validate();
  CdfState state{GlobalStats(hyper.num_topics, hyper.vocab_size),
                 PhiMatrix(hyper.num_topics, hyper.vocab_size)};
  std::vector<double> concentration(hyper.vocab_size);
  for (std::size_t k = 0; k < hyper.num_topics; ++k) {
    resample_phi_row(state, hyper, static_cast<TopicId>(k), rng, concentration);
  }
  return state;
}

DocState cdf_process_doc(CdfState& state, const Document& doc, const Hyper& hyper, Rng& rng) {
  const std::size_t K = hyper.num_topics;
  DocState ds(K);
  ds.assignments.reserve(doc.length());
  std::vector<double> cumulative(K);

  for (WordId v : doc.tokens) {
    if (v >= hyper.vocab_size) throw std::out_of_range("cdf: word outside vocabulary");
    const TopicId k = draw_topic(state, ds, v, hyper, cumulative, rng);
    ds.assignments.push_back(k);
    ++ds.ndk[k];
    ++ds.nd;
  }
  for (std::size_t i = 0; i < doc.length(); ++i) {
    const WordId v = doc.tokens[i];
    --ds.ndk[ds.assignments[i]];
    const TopicId k = draw_topic(state, ds, v, hyper, cumulative, rng);
    ds.assignments[i] = k;
    ++ds.ndk[k];
  }

  for (std::size_t i = 0; i < doc.length(); ++i) {
    state.nkv_hat.add(ds.assignments[i], doc.tokens[i], 1.0);
  }
  std::vector<double> concentration(hyper.vocab_size);
  for (std::size_t k = 0; k < K; ++k) {
    resample_phi_row(state, hyper, static_cast<TopicId>(k), rng, concentration);
  }
  return ds;
}

CdfState run_cdf_lda(const BatchSource& stream, const Hyper& hyper, Rng& rng,
                     const ReportSink& sink, const BatchEvaluator& evaluator) {
  CdfState state = cdf_init(hyper, rng);
  while (auto batch = stream()) {
    const auto start = std::chrono::steady_clock::now();
    BatchReport report;
    report.batch_index = batch->index;
    report.iterations = 1;
    report.num_docs = batch->docs.size();
    report.num_tokens = batch->num_tokens();
    report.resident_docs = 1;

    std::vector<std::vector<double>> thetas;
    double log_likelihood = 0.0;
    for (const Document& doc : batch->docs) {
      const DocState ds = cdf_process_doc(state, doc, hyper, rng);
      auto theta = theta_mean(ds, hyper);
      // Scored against the freshly drawn phi.
      for (WordId v : doc.tokens) {
        double p = 0.0;
        for (std::size_t k = 0; k < theta.size(); ++k) {
          p += theta[k] * state.phi(static_cast<TopicId>(k), v);
        }
        log_likelihood += std::log(p);
      }
      thetas.push_back(std::move(theta));
    }
    if (report.num_tokens > 0) {
      report.train_perplexity.push_back(
          std::exp(-log_likelihood / static_cast<double>(report.num_tokens)));
    }
    report.theta = std::move(thetas);
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (evaluator) report.heldout_perplexity = evaluator(*batch, state.nkv_hat);
    if (sink) sink(report, state.nkv_hat);
  }
  return state;
}

}  // namespace streamlda
