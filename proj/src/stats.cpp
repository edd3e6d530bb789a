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

#include "streamlda/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace streamlda {

void Hyper::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be > 0");
  if (num_topics < 1) throw std::invalid_argument("number of topics must be >= 1");
  if (vocab_size < 1) throw std::invalid_argument("vocabulary size must be >= 1");
}

GlobalStats::GlobalStats(std::size_t num_topics, std::size_t vocab_size)
    : rows_(num_topics), nk_(num_topics, 0.0), vocab_size_(vocab_size) {
  if (num_topics < 1 || vocab_size < 1) {
    throw std::invalid_argument("GlobalStats: dimensions must be positive");
  }
}

void GlobalStats::check_cell(TopicId k, WordId v) const {
  if (k >= rows_.size() || v >= vocab_size_) {
    throw std::out_of_range("cell (" + std::to_string(k) + ", " + std::to_string(v) +
                            ") outside " + std::to_string(rows_.size()) + "x" +
                            std::to_string(vocab_size_));
  }
}

std::size_t GlobalStats::num_entries() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

double GlobalStats::total_mass() const {
  double total = 0.0;
  for (double x : nk_) total += x;
  return total;
}

void GlobalStats::add(TopicId k, WordId v, double amount) {
  check_cell(k, v);
  if (!(amount > 0.0)) throw std::invalid_argument("GlobalStats::add: amount must be positive");
  rows_[k][v] += amount;
  nk_[k] += amount;
}

void GlobalStats::remove_one(TopicId k, WordId v) {
  check_cell(k, v);
  auto& row = rows_[k];
  const auto it = row.find(v);
  const double current = it == row.end() ? 0.0 : it->second;
  if (current < 1.0 - kNegativeTolerance) {
    throw std::logic_error("remove_one: count at (" + std::to_string(k) + ", " +
                           std::to_string(v) + ") is " + std::to_string(current));
  }
  const double next = current - 1.0;
  if (next <= 0.0) {
    row.erase(it);
    nk_[k] -= current;
  } else {
    it->second = next;
    nk_[k] -= 1.0;
  }
  if (row.empty() || nk_[k] < 0.0) nk_[k] = 0.0;
}

void GlobalStats::apply_decay(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("decay factor must lie in (0, 1]");
  }
  if (lambda == 1.0) return;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    auto& row = rows_[k];
    double pruned = 0.0;
    for (auto it = row.begin(); it != row.end();) {
      it->second *= lambda;
      if (it->second < prune_threshold_) {
        pruned += it->second;
        it = row.erase(it);
      } else {
        ++it;
      }
    }
    nk_[k] = row.empty() ? 0.0 : std::max(nk_[k] * lambda - pruned, 0.0);
  }
}

void GlobalStats::merge_delta(const SparseDelta& delta, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("decay factor must lie in (0, 1]");
  }
  // Validate the whole delta first so a rejected merge leaves no trace.
  std::unordered_map<std::uint64_t, double> pending;
  for (const auto& e : delta) {
    check_cell(e.topic, e.word);
    if (!std::isfinite(e.value)) throw std::invalid_argument("merge_delta: non-finite delta");
    const std::uint64_t key = static_cast<std::uint64_t>(e.topic) * vocab_size_ + e.word;
    auto [it, inserted] = pending.try_emplace(key, 0.0);
    if (inserted) it->second = count(e.topic, e.word);
    it->second += e.value;
    if (it->second < -kNegativeTolerance) {
      throw std::runtime_error("merge_delta: count at (" + std::to_string(e.topic) + ", " +
                               std::to_string(e.word) + ") would become " +
                               std::to_string(it->second));
    }
  }

  for (const auto& e : delta) {
    auto& row = rows_[e.topic];
    auto it = row.find(e.word);
    const double current = it == row.end() ? 0.0 : it->second;
    const double next = current + e.value;
    if (next <= 0.0) {
      if (it != row.end()) row.erase(it);
      nk_[e.topic] -= current;
    } else {
      row[e.word] = next;
      nk_[e.topic] += e.value;
    }
    if (row.empty()) {
      nk_[e.topic] = 0.0;
    } else if (nk_[e.topic] < 0.0) {
      nk_[e.topic] = 0.0;
    }
  }
  apply_decay(lambda);
}

SparseDelta GlobalStats::entries() const {
  SparseDelta out;
  out.reserve(num_entries());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t first = out.size();
    for (const auto& [v, c] : rows_[k]) out.push_back({static_cast<TopicId>(k), v, c});
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.word < b.word; });
  }
  return out;
}

GlobalStats GlobalStats::from_entries(std::size_t num_topics, std::size_t vocab_size,
                                      const SparseDelta& entries) {
  GlobalStats stats(num_topics, vocab_size);
  for (const auto& e : entries) {
    if (e.value < 0.0 || !std::isfinite(e.value)) {
      throw std::invalid_argument("from_entries: counts must be finite and non-negative");
    }
    if (e.value > 0.0) stats.add(e.topic, e.word, e.value);
  }
  return stats;
}

bool operator==(const GlobalStats& a, const GlobalStats& b) {
  return a.vocab_size_ == b.vocab_size_ && a.nk_ == b.nk_ && a.rows_ == b.rows_;
}

GlobalStats new_stats(const Hyper& hyper) {
  hyper.validate();
  return GlobalStats(hyper.num_topics, hyper.vocab_size);
}

void add_token(GlobalStats& stats, DocState& doc, TopicId k, WordId v) {
  stats.add(k, v, 1.0);
  ++doc.ndk[k];
  ++doc.nd;
}

void remove_token(GlobalStats& stats, DocState& doc, TopicId k, WordId v) {
  if (doc.ndk[k] < 1 || doc.nd < 1) {
    throw std::logic_error("remove_token: document count for topic " + std::to_string(k) +
                           " is zero");
  }
  stats.remove_one(k, v);
  --doc.ndk[k];
  --doc.nd;
}

void apply_decay(GlobalStats& stats, double lambda) { stats.apply_decay(lambda); }

double phi_mean(const GlobalStats& stats, const Hyper& hyper, TopicId k, WordId v) {
  const double vb = static_cast<double>(stats.vocab_size()) * hyper.beta;
  return (stats.count(k, v) + hyper.beta) / (stats.topic_total(k) + vb);
}

double theta_mean(const DocState& doc, const Hyper& hyper, TopicId k) {
  const double ka = static_cast<double>(doc.ndk.size()) * hyper.alpha;
  return (doc.ndk[k] + hyper.alpha) / (static_cast<double>(doc.nd) + ka);
}

std::vector<double> theta_mean(const DocState& doc, const Hyper& hyper) {
  std::vector<double> theta(doc.ndk.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    theta[k] = theta_mean(doc, hyper, static_cast<TopicId>(k));
  }
  return theta;
}

GlobalStats snapshot(const GlobalStats& stats) { return stats; }

SparseDelta delta_between(const GlobalStats& before, const GlobalStats& after) {
  if (before.num_topics() != after.num_topics() || before.vocab_size() != after.vocab_size()) {
    throw std::invalid_argument("delta_between: dimension mismatch");
  }
  SparseDelta delta;
  for (std::size_t k = 0; k < after.num_topics(); ++k) {
    const auto topic = static_cast<TopicId>(k);
    const std::size_t first = delta.size();
    for (const auto& [v, c] : after.row(topic)) {
      const double diff = c - before.count(topic, v);
      if (diff != 0.0) delta.push_back({topic, v, diff});
    }
    for (const auto& [v, c] : before.row(topic)) {
      if (after.row(topic).find(v) == after.row(topic).end()) delta.push_back({topic, v, -c});
    }
    std::sort(delta.begin() + static_cast<std::ptrdiff_t>(first), delta.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.word < b.word; });
  }
  return delta;
}

void merge_delta(GlobalStats& stats, const SparseDelta& delta, double lambda) {
  stats.merge_delta(delta, lambda);
}

bool PhiMatrix::is_stochastic(double tolerance) const {
  for (std::size_t k = 0; k < num_topics_; ++k) {
    double sum = 0.0;
    for (double x : row(static_cast<TopicId>(k))) {
      if (!(x >= 0.0) || !std::isfinite(x)) return false;
      sum += x;
    }
    if (std::abs(sum - 1.0) > tolerance) return false;
  }
  return true;
}

PhiMatrix phi_mean_matrix(const GlobalStats& stats, const Hyper& hyper) {
  PhiMatrix phi(stats.num_topics(), stats.vocab_size());
  const double vb = static_cast<double>(stats.vocab_size()) * hyper.beta;
  for (std::size_t k = 0; k < stats.num_topics(); ++k) {
    const auto topic = static_cast<TopicId>(k);
    const double denom = stats.topic_total(topic) + vb;
    auto row = phi.row(topic);
    std::fill(row.begin(), row.end(), hyper.beta / denom);
    for (const auto& [v, c] : stats.row(topic)) row[v] = (c + hyper.beta) / denom;
  }
  return phi;
}

void write_checkpoint(std::ostream& out, const GlobalStats& stats, const Hyper& hyper) {
  out << stats.num_topics() << ' ' << stats.vocab_size() << ' '
      << std::setprecision(std::numeric_limits<double>::max_digits10) << hyper.alpha << ' '
      << hyper.beta << '\n';
  for (const auto& e : stats.entries()) {
    out << e.topic << ' ' << e.word << ' ' << e.value << '\n';
  }
}

Checkpoint read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("checkpoint: missing header");
  std::istringstream header(line);
  Hyper hyper;
  if (!(header >> hyper.num_topics >> hyper.vocab_size >> hyper.alpha >> hyper.beta)) {
    throw DataError("checkpoint: malformed header");
  }
  try {
    hyper.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  SparseDelta entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long k = 0, v = 0;
    double c = 0.0;
    if (!(fields >> k >> v >> c) || k < 0 || v < 0 ||
        static_cast<std::size_t>(k) >= hyper.num_topics ||
        static_cast<std::size_t>(v) >= hyper.vocab_size || !(c >= 0.0)) {
      throw DataError("checkpoint: bad triple on line " + std::to_string(line_no));
    }
    entries.push_back({static_cast<TopicId>(k), static_cast<WordId>(v), c});
  }
  return {hyper, GlobalStats::from_entries(hyper.num_topics, hyper.vocab_size, entries)};
}

}  // namespace streamlda
