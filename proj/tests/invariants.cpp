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

#include "invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <tuple>

#include "streamlda/eval.hpp"
#include "streamlda/sampler.hpp"
#include "streamlda/stats.hpp"
#include "streamlda/wire.hpp"

namespace streamlda::testing {

namespace {

std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

double uniform_real(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

struct Dims {
  std::size_t K, V;
};

Dims random_dims(Rng& rng) { return {uniform_int(rng, 1, 6), uniform_int(rng, 1, 12)}; }

GlobalStats random_stats(Rng& rng, Dims d, std::size_t cells) {
  GlobalStats s(d.K, d.V);
  for (std::size_t i = 0; i < cells; ++i) {
    s.add(static_cast<TopicId>(uniform_int(rng, 0, d.K - 1)),
          static_cast<WordId>(uniform_int(rng, 0, d.V - 1)), uniform_real(rng, 1e-3, 20.0));
  }
  return s;
}

// Row sums against nk, relative tolerance 1e-9.
bool rows_consistent(const GlobalStats& s) {
  for (std::size_t k = 0; k < s.num_topics(); ++k) {
    double sum = 0.0;
    for (const auto& [v, c] : s.row(static_cast<TopicId>(k))) sum += c;
    const double nk = s.topic_total(static_cast<TopicId>(k));
    if (std::abs(nk - sum) > 1e-9 * std::max(1.0, nk)) return false;
  }
  return true;
}

bool non_negative(const GlobalStats& s) {
  for (const auto& e : s.entries()) {
    if (e.value < 0.0) return false;
  }
  for (double nk : s.topic_totals()) {
    if (nk < 0.0) return false;
  }
  return true;
}

// Applies one random operation: token add/remove, decay or a delta merge.
void random_op(GlobalStats& s, DocState& doc, std::vector<std::pair<TopicId, WordId>>& tokens,
               Rng& rng) {
  const Dims d{s.num_topics(), s.vocab_size()};
  switch (uniform_int(rng, 0, 3)) {
    case 0: {
      const auto k = static_cast<TopicId>(uniform_int(rng, 0, d.K - 1));
      const auto v = static_cast<WordId>(uniform_int(rng, 0, d.V - 1));
      add_token(s, doc, k, v);
      tokens.emplace_back(k, v);
      break;
    }
    case 1: {
      // Only tokens whose cell still holds a whole count can be removed.
      if (tokens.empty()) break;
      const std::size_t i = uniform_int(rng, 0, tokens.size() - 1);
      const auto [k, v] = tokens[i];
      if (s.count(k, v) < 1.0) break;
      remove_token(s, doc, k, v);
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
    case 2:
      s.apply_decay(uniform_real(rng, 0.05, 1.0));
      break;
    default: {
      SparseDelta delta;
      for (std::size_t n = uniform_int(rng, 0, 4); n > 0; --n) {
        const auto k = static_cast<TopicId>(uniform_int(rng, 0, d.K - 1));
        const auto v = static_cast<WordId>(uniform_int(rng, 0, d.V - 1));
        // Negative entries never exceed the current cell.
        const double value = rng.uniform() < 0.3 ? -s.count(k, v) * rng.uniform()
                                                 : uniform_real(rng, 0.0, 5.0);
        delta.push_back({k, v, value});
      }
      // Collapse duplicates so the negative bound above holds per cell.
      std::sort(delta.begin(), delta.end(), [](const SparseEntry& a, const SparseEntry& b) {
        return std::tie(a.topic, a.word) < std::tie(b.topic, b.word);
      });
      delta.erase(std::unique(delta.begin(), delta.end(),
                              [](const SparseEntry& a, const SparseEntry& b) {
                                return a.topic == b.topic && a.word == b.word;
                              }),
                  delta.end());
      merge_delta(s, delta, uniform_real(rng, 0.05, 1.0));
      break;
    }
  }
}

}  // namespace

InvariantResult check_row_sums_and_sign(std::size_t cases) {
  InvariantResult result{"row-sum conservation and non-negativity", cases};
  Rng rng(101);
  std::size_t violations_rows = 0, violations_sign = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    const Dims d = random_dims(rng);
    GlobalStats s = random_stats(rng, d, uniform_int(rng, 0, 8));
    DocState doc(d.K);
    std::vector<std::pair<TopicId, WordId>> tokens;
    for (std::size_t step = uniform_int(rng, 1, 20); step > 0; --step) {
      random_op(s, doc, tokens, rng);
      violations_rows += !rows_consistent(s);
      violations_sign += !non_negative(s);
    }
  }
  result.failures = violations_rows + violations_sign;
  return result;
}

InvariantResult check_decay_composition(std::size_t cases) {
  InvariantResult result{"decay composition", cases};
  Rng rng(202);
  std::size_t& failures = result.failures;
  for (std::size_t c = 0; c < cases; ++c) {
    const Dims d = random_dims(rng);
    GlobalStats a = random_stats(rng, d, uniform_int(rng, 1, 10));
    a.set_prune_threshold(0.0);
    GlobalStats b = a;
    const double l1 = uniform_real(rng, 1e-3, 1.0), l2 = uniform_real(rng, 1e-3, 1.0);
    a.apply_decay(l1);
    a.apply_decay(l2);
    b.apply_decay(l1 * l2);
    const auto ea = a.entries(), eb = b.entries();
    if (ea.size() != eb.size()) {
      ++failures;
      continue;
    }
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if (ea[i].topic != eb[i].topic || ea[i].word != eb[i].word ||
          std::abs(ea[i].value - eb[i].value) > 1e-9)
        ++failures;
    }
  }
  return result;
}

InvariantResult check_delta_round_trip(std::size_t cases) {
  InvariantResult result{"delta/merge round trip", cases};
  Rng rng(303);
  std::size_t& failures = result.failures;
  for (std::size_t c = 0; c < cases; ++c) {
    const Dims d = random_dims(rng);
    GlobalStats before = random_stats(rng, d, uniform_int(rng, 0, 10));
    GlobalStats after = random_stats(rng, d, uniform_int(rng, 0, 10));
    merge_delta(before, delta_between(before, after), 1.0);
    for (std::size_t k = 0; k < d.K; ++k) {
      for (std::size_t v = 0; v < d.V; ++v) {
        const auto t = static_cast<TopicId>(k);
        const auto w = static_cast<WordId>(v);
        if (std::abs(before.count(t, w) - after.count(t, w)) > 1e-9) ++failures;
      }
      if (std::abs(before.topic_total(static_cast<TopicId>(k)) -
                   after.topic_total(static_cast<TopicId>(k))) > 1e-9)
        ++failures;
    }
  }
  return result;
}

InvariantResult check_conditional_normalization(std::size_t cases) {
  InvariantResult result{"conditional normalization", cases};
  Rng rng(404);
  std::size_t& failures = result.failures;
  for (std::size_t c = 0; c < cases; ++c) {
    const Dims d = random_dims(rng);
    const Hyper h{uniform_real(rng, 0.01, 2.0), uniform_real(rng, 0.001, 1.0), d.K, d.V};
    GlobalStats s(d.K, d.V);
    DocState doc(d.K);
    for (std::size_t n = uniform_int(rng, 0, 30); n > 0; --n) {
      add_token(s, doc, static_cast<TopicId>(uniform_int(rng, 0, d.K - 1)),
                static_cast<WordId>(uniform_int(rng, 0, d.V - 1)));
    }
    const auto v = static_cast<WordId>(uniform_int(rng, 0, d.V - 1));
    const auto p = conditional_probs(s, doc, v, h);
    double sum = 0.0;
    for (double x : p) {
      if (x < 0.0) ++failures;
      sum += x;
    }
    if (p.size() != d.K || std::abs(sum - 1.0) > 1e-12) ++failures;
  }
  return result;
}

InvariantResult check_phi_theta_normalization(std::size_t cases) {
  InvariantResult result{"phi/theta normalization", cases};
  Rng rng(505);
  std::size_t& failures = result.failures;
  for (std::size_t c = 0; c < cases; ++c) {
    const Dims d = random_dims(rng);
    const Hyper h{uniform_real(rng, 0.01, 2.0), uniform_real(rng, 0.001, 1.0), d.K, d.V};
    const GlobalStats s = random_stats(rng, d, uniform_int(rng, 0, 12));
    for (std::size_t k = 0; k < d.K; ++k) {
      double sum = 0.0;
      for (std::size_t v = 0; v < d.V; ++v)
        sum += phi_mean(s, h, static_cast<TopicId>(k), static_cast<WordId>(v));
      if (std::abs(sum - 1.0) > 1e-12) ++failures;
    }
    DocState doc(d.K);
    for (std::size_t k = 0; k < d.K; ++k) {
      doc.ndk[k] = static_cast<std::int32_t>(uniform_int(rng, 0, 50));
      doc.nd += doc.ndk[k];
    }
    double sum = 0.0;
    for (double t : theta_mean(doc, h)) sum += t;
    if (std::abs(sum - 1.0) > 1e-12) ++failures;
  }
  return result;
}

InvariantResult check_wire_round_trip(std::size_t cases) {
  InvariantResult result{"wire round trip", cases};
  Rng rng(606);
  std::size_t& failures = result.failures;
  for (std::size_t c = 0; c < cases; ++c) {
    wire::Message m;
    const std::uint32_t K = static_cast<std::uint32_t>(uniform_int(rng, 1, 100));
    const std::uint32_t V = static_cast<std::uint32_t>(uniform_int(rng, 1, 100000));
    SparseDelta entries;
    for (std::size_t n = uniform_int(rng, 0, 20); n > 0; --n) {
      // Arbitrary bit patterns exercise every double, NaN excluded since it never compares equal.
      double value;
      do {
        const std::uint64_t bits = rng.engine()();
        std::memcpy(&value, &bits, sizeof value);
      } while (std::isnan(value));
      entries.push_back({static_cast<TopicId>(uniform_int(rng, 0, K - 1)),
                         static_cast<WordId>(uniform_int(rng, 0, V - 1)), value});
    }
    switch (uniform_int(rng, 0, 3)) {
      case 0: m = wire::Fetch{}; break;
      case 1: m = wire::Snapshot{K, V, rng.uniform(), entries}; break;
      case 2: m = wire::Push{entries}; break;
      default: m = wire::Ack{rng.uniform() < 0.5}; break;
    }
    const auto frame = wire::encode(m);
    if (wire::peek_length(frame) != frame.size() - wire::kLengthBytes) ++failures;
    if (!(wire::decode(frame) == m)) ++failures;
  }
  return result;
}

InvariantResult check_uniform_perplexity(std::size_t cases) {
  InvariantResult result{"uniform-model perplexity = V", cases};
  Rng rng(707);
  EvalConfig cfg;
  cfg.foldin_sweeps = 2;
  cfg.foldin_averaged_tail = 1;
  for (std::size_t c = 0; c < cases; ++c) {
    const Dims d = random_dims(rng);
    const Hyper h{0.1, 0.03, d.K, d.V};
    std::vector<Document> docs(uniform_int(rng, 1, 4));
    for (std::size_t i = 0; i < docs.size(); ++i) {
      docs[i].id = i;
      for (std::size_t n = uniform_int(rng, 2, 12); n > 0; --n)
        docs[i].tokens.push_back(static_cast<WordId>(uniform_int(rng, 0, d.V - 1)));
    }
    cfg.seed = static_cast<std::uint64_t>(c);
    const double p =
        corpus_perplexity(PhiMatrix(d.K, d.V, 1.0 / static_cast<double>(d.V)), docs, h, cfg);
    const double err = std::abs(p - static_cast<double>(d.V)) / static_cast<double>(d.V);
    result.worst = std::max(result.worst, err);
    if (err > 1e-12) ++result.failures;
  }
  return result;
}

std::vector<InvariantResult> run_all_invariants(std::size_t cases) {
  return {check_row_sums_and_sign(cases),         check_decay_composition(cases),
          check_delta_round_trip(cases),          check_conditional_normalization(cases),
          check_phi_theta_normalization(cases),   check_wire_round_trip(cases),
          check_uniform_perplexity(cases)};
}

}  // namespace streamlda::testing
