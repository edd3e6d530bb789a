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
#include <optional>
#include <vector>

#include "streamlda/corpus.hpp"
#include "streamlda/stats.hpp"

namespace streamlda {

/// Redraw all topic-word distributions once the stream reaches batch
/// `after_batch` (1-based batches of `batch_size` documents): documents with
/// index >= after_batch * batch_size use the new topics.
struct Drift {
  std::size_t batch_size = 100;
  std::size_t after_batch = 1;
};

struct GenSpec {
  std::size_t num_docs = 100;
  std::size_t num_topics = 5;
  std::size_t vocab_size = 100;
  double mean_doc_length = 100.0;
  bool poisson_length = true;  // false: every document has round(mean) tokens
  double alpha = 0.1;
  double beta = 0.1;
  std::uint64_t seed = 1;
  std::optional<Drift> drift;

  void validate() const;
};

struct SynthCorpus {
  Corpus corpus;
  // True topics; a second entry exists when drift is configured.
  std::vector<PhiMatrix> phi;
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<TopicId>> topics;  // true z per token
};

/// Forward sample of the LDA generative process:
///   phi_k ~ Dir(beta), theta_d ~ Dir(alpha), z ~ Mult(theta_d), w ~ Mult(phi_z).
SynthCorpus generate(const GenSpec& spec);

}  // namespace streamlda
