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

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace qcbm {

/// Hardware-efficient ansatz on a line of qubits: L+1 layers of R_y
/// rotations with L brickwork CNOT layers in between.
struct CircuitShape {
  unsigned qubits = 1;
  unsigned layers = 0;

  std::size_t parameter_count() const { return std::size_t{qubits} * (layers + 1); }
  std::uint64_t dimension() const { return std::uint64_t{1} << qubits; }
  void validate() const;

  friend bool operator==(const CircuitShape&, const CircuitShape&) = default;
};

inline constexpr unsigned kMaxQubits = 26;

/// Added to every first-layer angle at evaluation time so the circuit starts
/// near |+...+>. Not part of the trainable vector.
inline constexpr double kFirstLayerOffset = std::numbers::pi / 2.0;

enum class FirstLayerOffset { half_pi, none };

/// Trainable angles, layer-major then qubit-ascending:
/// theta[layer * qubits + qubit].
struct CircuitParams {
  CircuitShape shape;
  std::vector<double> theta;

  CircuitParams() = default;
  CircuitParams(CircuitShape s, std::vector<double> angles);

  double angle(unsigned layer, unsigned qubit) const { return theta[std::size_t{layer} * shape.qubits + qubit]; }
};

/// Real amplitudes; R_y and CNOT keep the state real.
struct StateVector {
  unsigned qubits = 0;
  std::vector<double> amplitudes;

  double norm_squared() const;
};

struct ShotSample {
  unsigned qubits = 0;
  std::vector<std::uint64_t> outcomes;

  std::size_t shots() const { return outcomes.size(); }
};

/// In-place gate sweeps over a 2^n amplitude array. Large arrays are split
/// across OpenMP threads; the arithmetic per amplitude is identical to the
/// serial versions in qcbm::reference, so results are bit-identical.
void apply_ry(std::span<double> amplitudes, unsigned qubit, double theta);
void apply_cnot(std::span<double> amplitudes, unsigned control, unsigned target);

/// Entangling sublayers: pairs (0,1),(2,3),... then (1,2),(3,4),...; control
/// is the lower qubit, an unpaired last qubit is skipped.
void apply_brickwork(std::span<double> amplitudes, unsigned qubits);

StateVector build_state(const CircuitParams& params, FirstLayerOffset offset = FirstLayerOffset::half_pi);

/// p(b) = amplitude(b)^2, indexed by the integer value of b.
std::vector<double> born_probabilities(const StateVector& state);

/// Inverse-CDF sampling on the cumulative distribution. Deterministic in seed.
ShotSample sample_shots(std::span<const double> probabilities, unsigned qubits, std::size_t shots,
                        std::uint64_t seed);
ShotSample sample_shots(const StateVector& state, std::size_t shots, std::uint64_t seed);

/// Stored angles i.i.d. uniform on [-0.025, 0.025].
CircuitParams init_params(const CircuitShape& shape, std::uint64_t seed);

inline constexpr double kInitHalfWidth = 0.025;

namespace reference {

// Straightforward serial kernels kept as the test oracle and benchmark
// baseline for the parallel ones.
void apply_ry(std::span<double> amplitudes, unsigned qubit, double theta);
void apply_cnot(std::span<double> amplitudes, unsigned control, unsigned target);
StateVector build_state(const CircuitParams& params, FirstLayerOffset offset = FirstLayerOffset::half_pi);

}  // namespace reference

}  // namespace qcbm
