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

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace streamlda {

/// Seedable generator shared by every sampler. Identical seed and identical
/// call sequence give identical outputs on a given standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) built from the top 53 bits of one draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double gamma(double shape) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent seed from a base seed and a stream identifier
/// (splitmix64 finalizer over the pair).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Draws an index from non-negative cumulative weights with one uniform.
/// `cumulative` must be non-decreasing with a positive last element.
inline std::size_t sample_cumulative(std::span<const double> cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (u < cumulative[i]) return i;
  }
  return cumulative.size() - 1;
}

/// Draws from Dir(concentration) by normalizing independent Gamma draws.
/// Shapes below one use Gamma(a) = Gamma(a + 1) * U^(1/a), evaluated in log
/// space so small concentrations do not underflow the whole vector.
inline std::vector<double> sample_dirichlet(std::span<const double> concentration, Rng& rng) {
  if (concentration.empty()) throw std::invalid_argument("sample_dirichlet: empty concentration");
  std::vector<double> log_gamma(concentration.size());
  double max_log = -INFINITY;
  for (std::size_t i = 0; i < concentration.size(); ++i) {
    const double a = concentration[i];
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("sample_dirichlet: concentration must be positive");
    }
    double lg;
    if (a < 1.0) {
      double u = rng.uniform();
      while (u == 0.0) u = rng.uniform();
      lg = std::log(rng.gamma(a + 1.0)) + std::log(u) / a;
    } else {
      lg = std::log(rng.gamma(a));
    }
    log_gamma[i] = lg;
    if (lg > max_log) max_log = lg;
  }
  double total = 0.0;
  for (double& x : log_gamma) {
    x = std::exp(x - max_log);
    total += x;
  }
  for (double& x : log_gamma) x /= total;
  return log_gamma;
}

}  // namespace streamlda
