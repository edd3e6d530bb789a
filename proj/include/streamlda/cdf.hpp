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

#include <functional>
#include <optional>

#include "streamlda/corpus.hpp"
#include "streamlda/random.hpp"
#include "streamlda/stats.hpp"
#include "streamlda/streaming.hpp"

namespace streamlda {

// sample_dirichlet lives in random.hpp; the synthetic generator shares it.

/// Conditional density filtering state for LDA: accumulated topic-word
/// counts (never decayed) and the current explicit phi sample.
struct CdfState {
  GlobalStats nkv_hat;
  PhiMatrix phi;
};

/// Fresh state: zero counts, each phi row drawn from the symmetric Dir(beta).
CdfState cdf_init(const Hyper& hyper, Rng& rng);

/// One document: progressive assignment against the fixed phi, a single
/// resampling pass with p(z_i = k) ∝ (ndk^-i + alpha) phi[k][v_i], the
/// document's counts added to nkv_hat, then every phi row redrawn from
/// Dir(nkv_hat[k] + beta).
DocState cdf_process_doc(CdfState& state, const Document& doc, const Hyper& hyper, Rng& rng);

/// Runs documents one at a time in stream order. The report sink is called
/// once per mini-batch with the same record schema as the streaming driver;
/// the stats passed to it and the evaluator are nkv_hat.
CdfState run_cdf_lda(const BatchSource& stream, const Hyper& hyper, Rng& rng,
                     const ReportSink& sink = {}, const BatchEvaluator& evaluator = {});

}  // namespace streamlda
