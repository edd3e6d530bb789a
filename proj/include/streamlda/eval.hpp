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
#include <iosfwd>
#include <span>
#include <vector>

#include "streamlda/corpus.hpp"
#include "streamlda/random.hpp"
#include "streamlda/stats.hpp"

namespace streamlda {

struct EvalConfig {
  std::size_t foldin_sweeps = 50;
  std::size_t foldin_averaged_tail = 20;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Infers a held-out document's topic proportions from its observed tokens
/// with phi fixed. Gibbs over z with p(z_i = k) ∝ (ndk^-i + alpha) phi[k][v_i];
/// after (sweeps - tail) burn-in sweeps, theta_mean is averaged over the last
/// `tail` sweeps. Empty input returns the prior mean 1/K.
std::vector<double> fold_in_theta(const PhiMatrix& phi, std::span<const WordId> observed,
                                  const Hyper& hyper, const EvalConfig& config, Rng& rng);

/// sum_i log sum_k phi[k][v_i] theta[k]; zero for an empty span. Throws
/// std::domain_error if some token has zero mixture probability.
double doc_log_likelihood(const PhiMatrix& phi, std::span<const double> theta,
                          std::span<const WordId> heldout);

struct DocPerplexity {
  std::size_t doc_id = 0;
  std::size_t heldout_tokens = 0;
  double log_likelihood = 0.0;
  double perplexity = 0.0;
};

struct PerplexityReport {
  std::vector<DocPerplexity> docs;  // documents with a non-empty held-out half
  std::size_t heldout_tokens = 0;
  double log_likelihood = 0.0;
  double perplexity = 0.0;           // token-weighted: exp(-sum ll / sum tokens)
  double mean_doc_perplexity = 0.0;  // unweighted mean of per-document values
};

/// Splits every test document in halves, folds in theta on the first and
/// scores the second. Each document uses its own RNG stream derived from
/// (config.seed, doc id), so the result does not depend on document order.
/// Throws std::invalid_argument when no held-out tokens exist at all.
PerplexityReport evaluate_perplexity(const PhiMatrix& phi, const std::vector<Document>& test_docs,
                                     const Hyper& hyper, const EvalConfig& config);

double corpus_perplexity(const PhiMatrix& phi, const std::vector<Document>& test_docs,
                         const Hyper& hyper, const EvalConfig& config);

/// doc_id,heldout_tokens,perplexity rows followed by "corpus" and
/// "mean_doc" summary rows.
void write_eval_csv(std::ostream& out, const PerplexityReport& report);

}  // namespace streamlda
