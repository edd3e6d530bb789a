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

#include <iosfwd>
#include <string>

#include "streamlda/streaming.hpp"

namespace streamlda {

/// Writes one record per batch as CSV and/or line-delimited JSON.
/// Columns: t, iterations, docs, tokens, train_perplexity,
/// heldout_perplexity (empty when not evaluated), wall_ms, tokens_per_sec.
class MetricsWriter {
 public:
  MetricsWriter(std::ostream* csv, std::ostream* jsonl);

  void write(const BatchReport& report);

  static std::string csv_header();

 private:
  std::ostream* csv_;
  std::ostream* jsonl_;
};

}  // namespace streamlda
