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
#include <unordered_map>
#include <vector>

#include "streamlda/common.hpp"

namespace streamlda {

/// Symmetric LDA hyperparameters. Defaults are alpha=0.1, beta=0.03, K=50.
struct Hyper {
  double alpha = 0.1;
  double beta = 0.03;
  std::size_t num_topics = 50;
  std::size_t vocab_size = 1;

  void validate() const;
};

/// One (topic, word, value) cell. Used for count deltas, snapshots and
/// checkpoints alike.
struct SparseEntry {
  TopicId topic = 0;
  WordId word = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// At most one entry per (topic, word); sorted topic-major, word ascending.
using SparseDelta = std::vector<SparseEntry>;

/// Per-document topic assignments and counts.
struct DocState {
  std::vector<TopicId> assignments;
  std::vector<std::int32_t> ndk;
  std::size_t nd = 0;

  explicit DocState(std::size_t num_topics) : ndk(num_topics, 0) {}
};

/// Sparse topic-word counts N_kv (one hash row per topic) and dense topic
/// totals N_k. Counts are real-valued so decay can shrink them.
///
/// Row-sum invariant: |nk[k] - sum_v nkv[k][v]| <= 1e-9 * max(1, nk[k]).
/// Stored entries are always positive; cells that reach zero, or fall below
/// the prune threshold during decay, are erased and their mass is removed
/// from nk.
class GlobalStats {
 public:
  using Row = std::unordered_map<WordId, double>;
  static constexpr double kDefaultPruneThreshold = 1e-10;
  static constexpr double kNegativeTolerance = 1e-9;

  GlobalStats(std::size_t num_topics, std::size_t vocab_size);

  std::size_t num_topics() const { return rows_.size(); }
  std::size_t vocab_size() const { return vocab_size_; }

  double count(TopicId k, WordId v) const {
    const auto& row = rows_[k];
    const auto it = row.find(v);
    return it == row.end() ? 0.0 : it->second;
  }
  double topic_total(TopicId k) const { return nk_[k]; }
  const std::vector<double>& topic_totals() const { return nk_; }
  const Row& row(TopicId k) const { return rows_[k]; }
  std::size_t num_entries() const;
  double total_mass() const;

  /// Adds `amount` (> 0) to a cell and its topic total.
  void add(TopicId k, WordId v, double amount);

  /// Subtracts one from a cell. Throws std::logic_error when the cell holds
  /// less than one count, which means the caller's bookkeeping is broken.
  void remove_one(TopicId k, WordId v);

  /// Multiplies every entry and total by lambda in (0, 1], then prunes.
  void apply_decay(double lambda);

  /// Adds the delta entrywise, then decays by lambda. A cell driven below
  /// zero by at most kNegativeTolerance is clamped; anything lower throws
  /// std::runtime_error and leaves the stats untouched.
  void merge_delta(const SparseDelta& delta, double lambda);

  double prune_threshold() const { return prune_threshold_; }
  void set_prune_threshold(double threshold) { prune_threshold_ = threshold; }

  /// All stored entries, topic-major with words ascending.
  SparseDelta entries() const;

  /// Rebuilds stats from triples; nk is the row sum in the given order.
  static GlobalStats from_entries(std::size_t num_topics, std::size_t vocab_size,
                                  const SparseDelta& entries);

  /// Exact (bitwise) equality of dimensions, cells and totals.
  friend bool operator==(const GlobalStats& a, const GlobalStats& b);

 private:
  void check_cell(TopicId k, WordId v) const;

  std::vector<Row> rows_;
  std::vector<double> nk_;
  std::size_t vocab_size_;
  double prune_threshold_ = kDefaultPruneThreshold;
};

GlobalStats new_stats(const Hyper& hyper);

/// +1 to nkv[k][v], nk[k], ndk[k] and nd.
void add_token(GlobalStats& stats, DocState& doc, TopicId k, WordId v);

/// -1 to the same counts; throws std::logic_error on underflow.
void remove_token(GlobalStats& stats, DocState& doc, TopicId k, WordId v);

void apply_decay(GlobalStats& stats, double lambda);

/// (nkv[k][v] + beta) / (nk[k] + V beta)
double phi_mean(const GlobalStats& stats, const Hyper& hyper, TopicId k, WordId v);

/// (ndk[k] + alpha) / (nd + K alpha)
double theta_mean(const DocState& doc, const Hyper& hyper, TopicId k);
std::vector<double> theta_mean(const DocState& doc, const Hyper& hyper);

GlobalStats snapshot(const GlobalStats& stats);

/// after - before at every cell where they differ.
SparseDelta delta_between(const GlobalStats& before, const GlobalStats& after);

void merge_delta(GlobalStats& stats, const SparseDelta& delta, double lambda);

/// Dense K x V row-stochastic matrix.
class PhiMatrix {
 public:
  PhiMatrix() = default;
  PhiMatrix(std::size_t num_topics, std::size_t vocab_size, double fill = 0.0)
      : num_topics_(num_topics), vocab_size_(vocab_size), values_(num_topics * vocab_size, fill) {}

  std::size_t num_topics() const { return num_topics_; }
  std::size_t vocab_size() const { return vocab_size_; }

  double operator()(TopicId k, WordId v) const { return values_[k * vocab_size_ + v]; }
  double& operator()(TopicId k, WordId v) { return values_[k * vocab_size_ + v]; }

  std::span<const double> row(TopicId k) const {
    return {values_.data() + k * vocab_size_, vocab_size_};
  }
  std::span<double> row(TopicId k) { return {values_.data() + k * vocab_size_, vocab_size_}; }

  /// True when every row is non-negative and sums to one within `tolerance`.
  bool is_stochastic(double tolerance = 1e-9) const;

 private:
  std::size_t num_topics_ = 0;
  std::size_t vocab_size_ = 0;
  std::vector<double> values_;
};

/// phi_mean evaluated at every cell.
PhiMatrix phi_mean_matrix(const GlobalStats& stats, const Hyper& hyper);

/// Model checkpoint: "K V alpha beta" header line, then "topic word count"
/// triples in topic-major order.
struct Checkpoint {
  Hyper hyper;
  GlobalStats stats;
};

void write_checkpoint(std::ostream& out, const GlobalStats& stats, const Hyper& hyper);
Checkpoint read_checkpoint(std::istream& in);

}  // namespace streamlda
