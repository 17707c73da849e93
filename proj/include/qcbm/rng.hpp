/* Copyright 2026 The qcbm-codes Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <cstdint>
#include <random>

namespace qcbm {

// Independent seed streams. Every consumer of randomness derives its engine
// seed from (user seed, stream, index) so that one factor can be varied
// without disturbing the others.
enum class SeedStream : std::uint64_t {
  dataset   = 0x64617461,
  init      = 0x696e6974,
  shots     = 0x73686f74,
  code      = 0x636f6465,
  reference = 0x72656665,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream, std::uint64_t index = 0);

/// Reproducible random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions below are implemented here rather than taken
/// from <random>, because the standard library distributions are allowed to
/// differ between implementations:
///   - uniform():  top 53 bits of one engine output, scaled to [0, 1)
///   - below(k):   rejection sampling on the largest multiple of k
///   - normal():   Box-Muller transform, both variates used in turn
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t bound);

  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_     = 0.0;
  bool   has_spare_ = false;
};

}  // namespace qcbm
