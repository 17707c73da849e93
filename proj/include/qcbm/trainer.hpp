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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcbm/codes.hpp"
#include "qcbm/mmd_loss.hpp"
#include "qcbm/quantum_sim.hpp"
#include "qcbm/target_data.hpp"

namespace qcbm {

/// Validation failure; the message starts with the offending field path,
/// e.g. "training.epochs: must be >= 1".
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AdamConfig {
  double learning_rate = 0.05;
  double beta1         = 0.9;
  double beta2         = 0.999;
  double epsilon       = 1e-8;

  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  AdamState(std::size_t parameters, AdamConfig cfg)
      : config(cfg), first_moment(parameters, 0.0), second_moment(parameters, 0.0)
  {
  }
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> gradient);

/// shots: every expectation estimated from sampled bitstrings.
/// exact: expectations under the Born probabilities (for verification).
enum class GradientMode { shots, exact };

/// Binds a code, the discretized space, the kernel and the training data.
class LossModel {
 public:
  LossModel(BinaryCode code, const DiscretizedSpace& space, KernelConfig cfg, std::span<const double> data);

  const BinaryCode& code() const { return code_; }
  const DiscretizedSpace& space() const { return space_; }
  const KernelConfig& kernel() const { return cfg_; }
  const LatticeKernel& lattice() const { return lattice_; }

  /// Representative index of every shot.
  std::vector<std::uint64_t> sample_representatives(const StateVector& state, std::size_t shots,
                                                    std::uint64_t seed) const;

  /// Model distribution over representatives, sampled or exact.
  IndexDistribution model_distribution(const StateVector& state, GradientMode mode, std::size_t shots,
                                       std::uint64_t seed) const;

  double exact_loss(const CircuitParams& params) const;

 private:
  BinaryCode code_;
  DiscretizedSpace space_;
  KernelConfig cfg_;
  LatticeKernel lattice_;
};

struct GradientResult {
  std::vector<double> gradient;
  std::size_t circuit_evaluations = 0;
};

/// Parameter-shift gradient of MMD^2:
///   dL/dtheta_i = E[k(base, plus)] - E[k(base, minus)]
///               - E[k(data, plus)] + E[k(data, minus)]
/// with plus/minus the circuits where theta_i is shifted by +-pi/2. Uses
/// 2 n (L+1) shifted circuits and one base circuit. Circuit c (0 = base,
/// 2i+1 = plus, 2i+2 = minus) samples with derive_seed(seed, shots, c), so
/// the result does not depend on how the parameters are split over threads.
GradientResult shift_gradient(const CircuitParams& params, const LossModel& model, std::size_t shots,
                              std::uint64_t seed, GradientMode mode = GradientMode::shots);

GradientResult shift_gradient(const CircuitParams& params, std::span<const double> data, const BinaryCode& code,
                              const DiscretizedSpace& space, const KernelConfig& cfg, std::size_t shots,
                              std::uint64_t seed, GradientMode mode = GradientMode::shots);

/// Held-out reference: `test_count` fresh draws from the target (defaults to
/// the training-set size), discretized to representatives and compared with
/// the raw training data.
double reference_loss(std::span<const double> train, const TargetDistribution& target, const DiscretizedSpace& space,
                      const KernelConfig& cfg, std::uint64_t seed, std::size_t test_count = 0,
                      Estimator estimator = Estimator::biased);

/// Geometric mean of the loss history. Throws on a non-positive entry.
double q_score(std::span<const double> history);

inline constexpr double kLossFloor = 1e-12;

struct ClampedQ {
  double q = 0.0;
  std::size_t clamped = 0;
};

/// q_score after raising entries below `floor` to `floor`.
ClampedQ q_score_clamped(std::span<const double> history, double floor = kLossFloor);

struct DatasetSpec {
  DistributionKind kind = DistributionKind::centered_gaussian;
  double width          = 0.03;
  std::size_t count     = 256;
  std::uint64_t seed    = 0;

  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

struct SeedConfig {
  std::uint64_t code      = 0;
  std::uint64_t init      = 0;
  std::uint64_t shots     = 0;
  std::uint64_t reference = 0;

  friend bool operator==(const SeedConfig&, const SeedConfig&) = default;
};

struct TrainingConfig {
  CodeKind code = CodeKind::reflected_gray;
  CircuitShape circuit{8, 0};
  DatasetSpec dataset;
  KernelConfig kernel;
  AdamConfig adam;
  std::size_t epochs          = 100;
  std::size_t shots           = 256;
  std::size_t reference_count = 256;
  Estimator estimator         = Estimator::biased;
  GradientMode gradient_mode  = GradientMode::shots;
  bool exact_loss             = false;
  SeedConfig seeds;

  /// All four seeds set to the dataset seed.
  void seed_all(std::uint64_t seed);
  void validate() const;

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

struct TrainingRecord {
  TrainingConfig config;
  std::vector<double> losses;
  std::vector<double> exact_losses;  // only with config.exact_loss
  std::vector<double> epoch_ms;
  std::vector<double> final_theta;
  double q_score        = 0.0;
  std::size_t clamped   = 0;
  double reference_loss = 0.0;
  std::vector<std::uint64_t> synthetic;  // representative index per final-epoch shot

  /// First epoch (1-based) whose loss is within 2x the reference.
  std::optional<std::size_t> epochs_to_reference() const;

  friend bool operator==(const TrainingRecord&, const TrainingRecord&) = default;
};

/// Per epoch: shift_gradient, adam_step, then the loss of a fresh shot sample
/// of the updated circuit against the full training set.
TrainingRecord train(const TrainingConfig& config);
TrainingRecord train(const TrainingConfig& config, const Dataset& dataset);

/// Circuit evaluations per epoch including the loss-recording circuit.
inline std::size_t circuits_per_epoch(const CircuitShape& shape) { return 2 * shape.parameter_count() + 2; }

}  // namespace qcbm
