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

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qcbm/mmd_loss.hpp"
#include "qcbm/quantum_sim.hpp"

namespace qcbm::reference {

void apply_ry(std::span<double> amplitudes, unsigned qubit, double theta)
{
  const double c          = std::cos(theta / 2.0);
  const double s          = std::sin(theta / 2.0);
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  if (bit >= amplitudes.size()) throw std::out_of_range("gate qubit outside the register");
  for (std::uint64_t i = 0; i < amplitudes.size(); ++i) {
    if (i & bit) continue;
    const double a0      = amplitudes[i];
    const double a1      = amplitudes[i | bit];
    amplitudes[i]        = c * a0 - s * a1;
    amplitudes[i | bit]  = s * a0 + c * a1;
  }
}

void apply_cnot(std::span<double> amplitudes, unsigned control, unsigned target)
{
  const std::uint64_t cbit = std::uint64_t{1} << control;
  const std::uint64_t tbit = std::uint64_t{1} << target;
  if (cbit >= amplitudes.size() || tbit >= amplitudes.size() || control == target)
    throw std::out_of_range("invalid CNOT qubits");
  for (std::uint64_t i = 0; i < amplitudes.size(); ++i)
    if ((i & cbit) && !(i & tbit)) std::swap(amplitudes[i], amplitudes[i | tbit]);
}

StateVector build_state(const CircuitParams& params, FirstLayerOffset offset)
{
  const auto& shape = params.shape;
  StateVector state{shape.qubits, std::vector<double>(shape.dimension(), 0.0)};
  state.amplitudes[0] = 1.0;
  for (unsigned layer = 0; layer <= shape.layers; ++layer) {
    for (unsigned q = 0; q < shape.qubits; ++q) {
      double angle = params.angle(layer, q);
      if (layer == 0 && offset == FirstLayerOffset::half_pi) angle += kFirstLayerOffset;
      apply_ry(state.amplitudes, q, angle);
    }
    if (layer == shape.layers) break;
    for (unsigned q = 0; q + 1 < shape.qubits; q += 2) apply_cnot(state.amplitudes, q, q + 1);
    for (unsigned q = 1; q + 1 < shape.qubits; q += 2) apply_cnot(state.amplitudes, q, q + 1);
  }
  return state;
}

double kernel_sum(std::span<const double> a, std::span<const double> b, const KernelConfig& cfg)
{
  double total = 0.0;
  for (double x : a)
    for (double y : b) total += kernel(x, y, cfg);
  return total;
}

}  // namespace qcbm::reference
