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

#include "streamlda/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "streamlda/random.hpp"

namespace streamlda {

void GenSpec::validate() const {
  if (num_docs < 1 || num_topics < 1 || vocab_size < 1) {
    throw std::invalid_argument("GenSpec: dimensions must be positive");
  }
  if (!(mean_doc_length >= 0.0)) throw std::invalid_argument("GenSpec: negative doc length");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("GenSpec: priors must be > 0");
  if (drift && (drift->batch_size < 1 || drift->after_batch < 1)) {
    throw std::invalid_argument("GenSpec: drift batch size and point must be >= 1");
  }
}

namespace {

PhiMatrix draw_topics(const GenSpec& spec, Rng& rng) {
  PhiMatrix phi(spec.num_topics, spec.vocab_size);
  const std::vector<double> prior(spec.vocab_size, spec.beta);
  for (std::size_t k = 0; k < spec.num_topics; ++k) {
    const auto row = sample_dirichlet(prior, rng);
    std::copy(row.begin(), row.end(), phi.row(static_cast<TopicId>(k)).begin());
  }
  return phi;
}

std::vector<double> row_cumulative(std::span<const double> row) {
  std::vector<double> c(row.size());
  double running = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) c[i] = running += row[i];
  return c;
}

}  // namespace

SynthCorpus generate(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SynthCorpus out;
  out.phi.push_back(draw_topics(spec, rng));
  std::size_t drift_doc = spec.num_docs;
  if (spec.drift) {
    out.phi.push_back(draw_topics(spec, rng));
    drift_doc = spec.drift->batch_size * spec.drift->after_batch;
  }

  std::vector<std::vector<std::vector<double>>> word_cdf(out.phi.size());
  for (std::size_t phase = 0; phase < out.phi.size(); ++phase) {
    for (std::size_t k = 0; k < spec.num_topics; ++k) {
      word_cdf[phase].push_back(row_cumulative(out.phi[phase].row(static_cast<TopicId>(k))));
    }
  }

  out.corpus.vocab.words.reserve(spec.vocab_size);
  for (std::size_t v = 0; v < spec.vocab_size; ++v) {
    out.corpus.vocab.words.push_back("w" + std::to_string(v));
  }

  const std::vector<double> doc_prior(spec.num_topics, spec.alpha);
  std::poisson_distribution<std::size_t> poisson(spec.mean_doc_length > 0 ? spec.mean_doc_length
                                                                          : 1.0);
  for (std::size_t d = 0; d < spec.num_docs; ++d) {
    const std::size_t phase = d >= drift_doc ? 1 : 0;
    auto theta = sample_dirichlet(doc_prior, rng);
    const auto theta_cdf = row_cumulative(theta);
    std::size_t length = 0;
    if (spec.mean_doc_length > 0.0) {
      length = spec.poisson_length ? poisson(rng.engine())
                                   : static_cast<std::size_t>(std::llround(spec.mean_doc_length));
    }
    Document doc;
    doc.id = d;
    doc.tokens.reserve(length);
    std::vector<TopicId> z;
    z.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
      const auto k = static_cast<TopicId>(sample_cumulative(theta_cdf, rng));
      z.push_back(k);
      doc.tokens.push_back(static_cast<WordId>(sample_cumulative(word_cdf[phase][k], rng)));
    }
    out.corpus.documents.push_back(std::move(doc));
    out.theta.push_back(std::move(theta));
    out.topics.push_back(std::move(z));
  }
  return out;
}

}  // namespace streamlda
