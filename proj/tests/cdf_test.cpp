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

#include <cmath>

#include "doctest.h"
#include "streamlda/cdf.hpp"
#include "streamlda/synth.hpp"
#include "test_util.hpp"

using namespace streamlda;
using streamlda::testing::corpus_of;

namespace {

double mass(const GlobalStats& s) {
  double t = 0.0;
  for (double x : s.topic_totals()) t += x;
  return t;
}

}  // namespace

TEST_CASE("sample_dirichlet") {
  Rng rng(3);
  SUBCASE("single coordinate") {
    const std::vector<double> c{2.5};
    CHECK(sample_dirichlet(c, rng) == std::vector<double>{1.0});
  }
  SUBCASE("symmetric mean is uniform") {
    const std::vector<double> c(4, 0.5);
    std::vector<double> mean(4, 0.0);
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
      const auto d = sample_dirichlet(c, rng);
      for (std::size_t j = 0; j < 4; ++j) mean[j] += d[j] / n;
    }
    for (double m : mean) CHECK(std::abs(m - 0.25) < 0.01);
  }
  SUBCASE("mean follows the concentration") {
    const double beta = 0.03;
    std::vector<double> c(10, beta);
    c[0] = 2.0 + beta;
    double mean0 = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) mean0 += sample_dirichlet(c, rng)[0] / n;
    CHECK(std::abs(mean0 - (2.0 + beta) / (2.0 + 10 * beta)) < 0.01);
  }
  SUBCASE("tiny concentrations still give a distribution") {
    const std::vector<double> c(1000, 1e-3);
    for (int i = 0; i < 100; ++i) {
      const auto d = sample_dirichlet(c, rng);
      double s = 0.0;
      for (double x : d) {
        CHECK(x >= 0.0);
        s += x;
      }
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(sample_dirichlet(std::vector<double>{}, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_dirichlet(std::vector<double>{1.0, 0.0}, rng), std::invalid_argument);
  }
}

TEST_CASE("cdf_init draws stochastic rows") {
  const Hyper h{0.1, 0.03, 5, 200};
  Rng rng(1);
  const CdfState s = cdf_init(h, rng);
  CHECK(s.phi.is_stochastic(1e-9));
  CHECK(s.nkv_hat.num_entries() == 0);
}

TEST_CASE("cdf_process_doc") {
  SUBCASE("one topic accumulates exact word counts") {
    const Hyper h{0.1, 0.03, 1, 4};
    Rng rng(2);
    CdfState s = cdf_init(h, rng);
    const Corpus c = corpus_of({{0, 3, 3, 1}}, 4);
    const DocState ds = cdf_process_doc(s, c.documents[0], h, rng);
    CHECK(ds.assignments == std::vector<TopicId>(4, 0));
    CHECK(s.nkv_hat.count(0, 3) == 2.0);
    CHECK(s.nkv_hat.count(0, 0) == 1.0);
    CHECK(s.nkv_hat.count(0, 2) == 0.0);
  }
  SUBCASE("first token is uniform under uniform phi") {
    const Hyper h{0.1, 0.03, 2, 3};
    const Corpus c = corpus_of({{1}}, 3);
    int zeros = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      Rng rng(derive_seed(5, static_cast<std::uint64_t>(i)));
      CdfState s{GlobalStats(2, 3), PhiMatrix(2, 3, 1.0 / 3)};
      // One token: the resampling pass draws from the same uniform conditional.
      zeros += cdf_process_doc(s, c.documents[0], h, rng).assignments[0] == 0;
    }
    CHECK(std::abs(static_cast<double>(zeros) / n - 0.5) < 0.015);
  }
  SUBCASE("mass conservation and monotone counts") {
    const Hyper h{0.1, 0.03, 5, 100};
    GenSpec spec;
    spec.num_docs = 30;
    const SynthCorpus synth = generate(spec);
    Rng rng(7);
    CdfState s = cdf_init(h, rng);
    double expected = 0.0;
    for (const auto& doc : synth.corpus.documents) {
      const GlobalStats before = s.nkv_hat;
      cdf_process_doc(s, doc, h, rng);
      expected += static_cast<double>(doc.length());
      CHECK(mass(s.nkv_hat) == expected);
      for (const auto& e : delta_between(before, s.nkv_hat)) CHECK(e.value > 0.0);
      CHECK(s.phi.is_stochastic(1e-9));
    }
  }
}

TEST_CASE("run_cdf_lda") {
  const Hyper h{0.1, 0.03, 5, 100};
  GenSpec spec;
  spec.num_docs = 40;
  const SynthCorpus synth = generate(spec);

  SUBCASE("empty stream") {
    Rng rng(1);
    CHECK(run_cdf_lda(batch_source(std::vector<MiniBatch>{}), h, rng).nkv_hat.num_entries() == 0);
  }
  SUBCASE("deterministic per seed") {
    Rng a(4), b(4);
    const CdfState x = run_cdf_lda(batch_source(synth.corpus, 10), h, a);
    const CdfState y = run_cdf_lda(batch_source(synth.corpus, 10), h, b);
    CHECK(x.nkv_hat == y.nkv_hat);
    for (TopicId k = 0; k < 5; ++k)
      for (WordId v = 0; v < 100; ++v) CHECK(x.phi(k, v) == y.phi(k, v));
  }
  SUBCASE("one report per batch") {
    std::vector<BatchReport> reports;
    Rng rng(1);
    run_cdf_lda(batch_source(synth.corpus, 10), h, rng,
                [&](const BatchReport& r, const GlobalStats&) { reports.push_back(r); });
    REQUIRE(reports.size() == 4);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      CHECK(reports[i].batch_index == i + 1);
      CHECK(reports[i].num_docs == 10);
      CHECK(reports[i].train_perplexity.size() == 1);
      CHECK(reports[i].final_train_perplexity() > 1.0);
      CHECK(reports[i].theta.size() == 10);
    }
  }
}
