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

// Randomized invariant checks, 10k cases per property.

#include "doctest.h"
#include "invariants.hpp"

using namespace streamlda::testing;

namespace {

constexpr std::size_t kCases = 10000;

void expect(const InvariantResult& r) {
  INFO(r.name << ": " << r.failures << " failures in " << r.cases << " cases, worst " << r.worst);
  CHECK(r.cases == kCases);
  CHECK(r.ok());
}

}  // namespace

TEST_CASE("row-sum conservation and non-negativity") { expect(check_row_sums_and_sign(kCases)); }
TEST_CASE("decay composition without pruning") { expect(check_decay_composition(kCases)); }
TEST_CASE("delta/merge round trip") { expect(check_delta_round_trip(kCases)); }
TEST_CASE("conditional_probs normalization") { expect(check_conditional_normalization(kCases)); }
TEST_CASE("phi and theta normalization") { expect(check_phi_theta_normalization(kCases)); }
TEST_CASE("wire encode/decode round trip") { expect(check_wire_round_trip(kCases)); }
TEST_CASE("uniform model perplexity equals V") { expect(check_uniform_perplexity(kCases)); }
