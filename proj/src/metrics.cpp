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

#include "streamlda/metrics.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace streamlda {

MetricsWriter::MetricsWriter(std::ostream* csv, std::ostream* jsonl) : csv_(csv), jsonl_(jsonl) {
  if (csv_) *csv_ << csv_header() << '\n';
}

std::string MetricsWriter::csv_header() {
  return "t,iterations,docs,tokens,train_perplexity,heldout_perplexity,wall_ms,tokens_per_sec";
}

void MetricsWriter::write(const BatchReport& report) {
  if (csv_) {
    auto& out = *csv_;
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << report.batch_index << ','
        << report.iterations << ',' << report.num_docs << ',' << report.num_tokens << ','
        << report.final_train_perplexity() << ',';
    if (report.heldout_perplexity) out << *report.heldout_perplexity;
    out << ',' << report.wall_ms << ',' << report.tokens_per_sec() << '\n';
  }
  if (jsonl_) {
    nlohmann::json record = {
        {"t", report.batch_index},
        {"iterations", report.iterations},
        {"docs", report.num_docs},
        {"tokens", report.num_tokens},
        {"train_perplexity", report.final_train_perplexity()},
        {"heldout_perplexity", nullptr},
        {"wall_ms", report.wall_ms},
        {"tokens_per_sec", report.tokens_per_sec()},
    };
    if (report.heldout_perplexity) record["heldout_perplexity"] = *report.heldout_perplexity;
    *jsonl_ << record.dump() << '\n';
  }
}

}  // namespace streamlda
