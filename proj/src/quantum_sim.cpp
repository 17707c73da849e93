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

#include "qcbm/quantum_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qcbm/rng.hpp"

namespace qcbm {

namespace {

// Below this many amplitude pairs a parallel region costs more than it saves.
constexpr std::int64_t kParallelPairs = std::int64_t{1} << 14;

void check_gate_target(std::span<double> amplitudes, unsigned qubit)
{
  if (!std::has_single_bit(amplitudes.size()) || (std::uint64_t{1} << qubit) >= amplitudes.size())
    throw std::out_of_range("gate qubit " + std::to_string(qubit) + " outside the register");
}

// Index of the k-th basis state whose bit `qubit` is zero.
inline std::uint64_t insert_zero(std::uint64_t k, unsigned qubit)
{
  const std::uint64_t low = k & ((std::uint64_t{1} << qubit) - 1);
  return ((k >> qubit) << (qubit + 1)) | low;
}

}  // namespace

void CircuitShape::validate() const
{
  if (qubits < 1 || qubits > kMaxQubits)
    throw std::invalid_argument("circuit qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
}

CircuitParams::CircuitParams(CircuitShape s, std::vector<double> angles) : shape(s), theta(std::move(angles))
{
  shape.validate();
  if (theta.size() != shape.parameter_count()) {
    throw std::invalid_argument("expected " + std::to_string(shape.parameter_count()) + " angles, got " +
                                std::to_string(theta.size()));
  }
  for (double t : theta)
    if (!std::isfinite(t)) throw std::invalid_argument("circuit angles must be finite");
}

double StateVector::norm_squared() const
{
  return std::transform_reduce(amplitudes.begin(), amplitudes.end(), 0.0, std::plus<>{},
                               [](double a) { return a * a; });
}

void apply_ry(std::span<double> amplitudes, unsigned qubit, double theta)
{
  check_gate_target(amplitudes, qubit);
  const double c             = std::cos(theta / 2.0);
  const double s             = std::sin(theta / 2.0);
  const std::uint64_t stride = std::uint64_t{1} << qubit;
  const auto pairs           = static_cast<std::int64_t>(amplitudes.size() / 2);
  double* a                  = amplitudes.data();
#pragma omp parallel for schedule(static) if (pairs >= kParallelPairs)
  for (std::int64_t k = 0; k < pairs; ++k) {
    const std::uint64_t i0 = insert_zero(static_cast<std::uint64_t>(k), qubit);
    const std::uint64_t i1 = i0 | stride;
    const double a0        = a[i0];
    const double a1        = a[i1];
    a[i0]                  = c * a0 - s * a1;
    a[i1]                  = s * a0 + c * a1;
  }
}

void apply_cnot(std::span<double> amplitudes, unsigned control, unsigned target)
{
  check_gate_target(amplitudes, control);
  check_gate_target(amplitudes, target);
  if (control == target) throw std::invalid_argument("CNOT control and target coincide");
  const std::uint64_t cmask = std::uint64_t{1} << control;
  const std::uint64_t tmask = std::uint64_t{1} << target;
  const auto pairs          = static_cast<std::int64_t>(amplitudes.size() / 2);
  double* a                 = amplitudes.data();
  // Each pair (i0, i0|tmask) is visited once; only pairs with control set swap.
#pragma omp parallel for schedule(static) if (pairs >= kParallelPairs)
  for (std::int64_t k = 0; k < pairs; ++k) {
    const std::uint64_t i0 = insert_zero(static_cast<std::uint64_t>(k), target);
    if (i0 & cmask) std::swap(a[i0], a[i0 | tmask]);
  }
}

void apply_brickwork(std::span<double> amplitudes, unsigned qubits)
{
  for (unsigned q = 0; q + 1 < qubits; q += 2) apply_cnot(amplitudes, q, q + 1);
  for (unsigned q = 1; q + 1 < qubits; q += 2) apply_cnot(amplitudes, q, q + 1);
}

StateVector build_state(const CircuitParams& params, FirstLayerOffset offset)
{
  const auto& shape = params.shape;
  StateVector state{shape.qubits, std::vector<double>(shape.dimension(), 0.0)};
  state.amplitudes[0] = 1.0;
  const double first  = offset == FirstLayerOffset::half_pi ? kFirstLayerOffset : 0.0;
  for (unsigned layer = 0; layer <= shape.layers; ++layer) {
    for (unsigned q = 0; q < shape.qubits; ++q)
      apply_ry(state.amplitudes, q, params.angle(layer, q) + (layer == 0 ? first : 0.0));
    if (layer < shape.layers) apply_brickwork(state.amplitudes, shape.qubits);
  }
  return state;
}

std::vector<double> born_probabilities(const StateVector& state)
{
  std::vector<double> p(state.amplitudes.size());
  std::transform(state.amplitudes.begin(), state.amplitudes.end(), p.begin(), [](double a) { return a * a; });
  return p;
}

ShotSample sample_shots(std::span<const double> probabilities, unsigned qubits, std::size_t shots,
                        std::uint64_t seed)
{
  if (shots < 1) throw std::invalid_argument("sample_shots: shots must be >= 1");
  if (probabilities.size() != (std::uint64_t{1} << qubits))
    throw std::invalid_argument("sample_shots: probability vector does not match qubit count");
  std::vector<double> cdf(probabilities.size());
  std::partial_sum(probabilities.begin(), probabilities.end(), cdf.begin());
  const double total = cdf.back();

  // Last index with nonzero mass; guards against u * total landing past a
  // rounding-short cumulative sum.
  std::size_t last = cdf.size() - 1;
  while (last > 0 && probabilities[last] == 0.0) --last;

  ShotSample sample{qubits, {}};
  sample.outcomes.reserve(shots);
  Rng rng(seed);
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it        = std::upper_bound(cdf.begin(), cdf.end(), u);
    auto idx       = static_cast<std::size_t>(it - cdf.begin());
    sample.outcomes.push_back(std::min(idx, last));
  }
  return sample;
}

ShotSample sample_shots(const StateVector& state, std::size_t shots, std::uint64_t seed)
{
  return sample_shots(born_probabilities(state), state.qubits, shots, seed);
}

CircuitParams init_params(const CircuitShape& shape, std::uint64_t seed)
{
  shape.validate();
  Rng rng(derive_seed(seed, SeedStream::init));
  std::vector<double> theta(shape.parameter_count());
  for (auto& t : theta) t = rng.uniform(-kInitHalfWidth, kInitHalfWidth);
  return {shape, std::move(theta)};
}

}  // namespace qcbm
