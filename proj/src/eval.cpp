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

#include "streamlda/eval.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace streamlda {

void EvalConfig::validate() const {
  if (foldin_sweeps < 1) throw std::invalid_argument("foldin_sweeps must be >= 1");
  if (foldin_averaged_tail < 1 || foldin_averaged_tail > foldin_sweeps) {
    throw std::invalid_argument("foldin_averaged_tail must lie in [1, foldin_sweeps]");
  }
}

std::vector<double> fold_in_theta(const PhiMatrix& phi, std::span<const WordId> observed,
                                  const Hyper& hyper, const EvalConfig& config, Rng& rng) {
  config.validate();
  const std::size_t K = phi.num_topics();
  if (observed.empty()) return std::vector<double>(K, 1.0 / static_cast<double>(K));

  std::vector<std::int32_t> ndk(K, 0);
  std::vector<TopicId> z(observed.size());
  std::vector<double> cumulative(K);

  auto draw = [&](WordId v) {
    double running = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      running += (ndk[k] + hyper.alpha) * phi(static_cast<TopicId>(k), v);
      cumulative[k] = running;
    }
    if (!(running > 0.0)) throw std::domain_error("fold_in_theta: word has zero probability");
    return static_cast<TopicId>(sample_cumulative(cumulative, rng));
  };

  for (std::size_t i = 0; i < observed.size(); ++i) {
    z[i] = draw(observed[i]);
    ++ndk[z[i]];
  }

  const double denominator = static_cast<double>(observed.size()) + static_cast<double>(K) * hyper.alpha;
  const std::size_t burn_in = config.foldin_sweeps - config.foldin_averaged_tail;
  std::vector<double> theta(K, 0.0);
  for (std::size_t sweep = 0; sweep < config.foldin_sweeps; ++sweep) {
    for (std::size_t i = 0; i < observed.size(); ++i) {
      --ndk[z[i]];
      z[i] = draw(observed[i]);
      ++ndk[z[i]];
    }
    if (sweep >= burn_in) {
      for (std::size_t k = 0; k < K; ++k) theta[k] += (ndk[k] + hyper.alpha) / denominator;
    }
  }
  for (double& t : theta) t /= static_cast<double>(config.foldin_averaged_tail);
  return theta;
}

double doc_log_likelihood(const PhiMatrix& phi, std::span<const double> theta,
                          std::span<const WordId> heldout) {
  if (theta.size() != phi.num_topics()) {
    throw std::invalid_argument("doc_log_likelihood: theta length differs from K");
  }
  double total = 0.0;
  for (WordId v : heldout) {
    double p = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) p += phi(static_cast<TopicId>(k), v) * theta[k];
    if (!(p > 0.0)) {
      throw std::domain_error("doc_log_likelihood: zero probability for word " + std::to_string(v));
    }
    total += std::log(p);
  }
  return total;
}

PerplexityReport evaluate_perplexity(const PhiMatrix& phi, const std::vector<Document>& test_docs,
                                     const Hyper& hyper, const EvalConfig& config) {
  config.validate();
  PerplexityReport report;
  double doc_perplexity_sum = 0.0;
  for (const Document& doc : test_docs) {
    const TokenHalves halves = split_tokens_half(doc);
    if (halves.heldout.empty()) continue;
    Rng rng(derive_seed(config.seed, doc.id));
    const auto theta = fold_in_theta(phi, halves.observed, hyper, config, rng);
    DocPerplexity dp;
    dp.doc_id = doc.id;
    dp.heldout_tokens = halves.heldout.size();
    dp.log_likelihood = doc_log_likelihood(phi, theta, halves.heldout);
    dp.perplexity = std::exp(-dp.log_likelihood / static_cast<double>(dp.heldout_tokens));
    report.heldout_tokens += dp.heldout_tokens;
    report.log_likelihood += dp.log_likelihood;
    doc_perplexity_sum += dp.perplexity;
    report.docs.push_back(dp);
  }
  if (report.heldout_tokens == 0) {
    throw std::invalid_argument("corpus_perplexity: no held-out tokens in the test set");
  }
  report.perplexity = std::exp(-report.log_likelihood / static_cast<double>(report.heldout_tokens));
  report.mean_doc_perplexity = doc_perplexity_sum / static_cast<double>(report.docs.size());
  return report;
}

double corpus_perplexity(const PhiMatrix& phi, const std::vector<Document>& test_docs,
                         const Hyper& hyper, const EvalConfig& config) {
  return evaluate_perplexity(phi, test_docs, hyper, config).perplexity;
}

void write_eval_csv(std::ostream& out, const PerplexityReport& report) {
  out << "doc_id,heldout_tokens,perplexity\n"
      << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& d : report.docs) {
    out << d.doc_id << ',' << d.heldout_tokens << ',' << d.perplexity << '\n';
  }
  out << "corpus," << report.heldout_tokens << ',' << report.perplexity << '\n';
  out << "mean_doc," << report.heldout_tokens << ',' << report.mean_doc_perplexity << '\n';
}

}  // namespace streamlda
