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
#include <optional>
#include <vector>

#include "streamlda/corpus.hpp"
#include "streamlda/random.hpp"
#include "streamlda/stats.hpp"

namespace streamlda {

/// Doc states aligned with the documents of one mini-batch.
struct BatchState {
  std::vector<DocState> docs;
};

/// Collapsed conditional for a token of word `v`:
///   p[k] ∝ (ndk[k] + alpha) * (nkv[k][v] + beta) / (nk[k] + V beta)
/// When `exclude` is set the token is assumed to be counted under that
/// topic and its contribution is taken out first.
std::vector<double> conditional_probs(const GlobalStats& stats, const DocState& doc, WordId v,
                                      const Hyper& hyper,
                                      std::optional<TopicId> exclude = std::nullopt);

/// Collapsed Gibbs sampling over shared stats. Holds a scratch buffer, so
/// one instance per thread.
class GibbsSampler {
 public:
  explicit GibbsSampler(const Hyper& hyper);

  const Hyper& hyper() const { return hyper_; }

  /// Removes the token at `position`, draws its new topic from the
  /// conditional and adds it back.
  TopicId resample_token(GlobalStats& stats, DocState& state, const Document& doc,
                         std::size_t position, Rng& rng);

  /// Assigns every token of the batch in order, each drawn from the
  /// conditional given all counts accumulated so far, then counted.
  BatchState progressive_init(GlobalStats& stats, const MiniBatch& batch, Rng& rng);

  /// Resamples every token once: documents in order, then positions.
  void sweep(GlobalStats& stats, BatchState& state, const MiniBatch& batch, Rng& rng);

 private:
  TopicId draw(const GlobalStats& stats, const DocState& state, WordId v, Rng& rng);

  Hyper hyper_;
  double vocab_beta_;
  std::vector<double> cumulative_;
};

struct CgsResult {
  GlobalStats stats;
  BatchState state;
};

/// Batch collapsed Gibbs sampling over the whole corpus as one batch.
/// `n_iters` counts the progressive initialization pass as iteration one,
/// followed by n_iters - 1 full sweeps.
CgsResult run_cgs(const Corpus& corpus, std::size_t n_iters, const Hyper& hyper, Rng& rng);

}  // namespace streamlda
