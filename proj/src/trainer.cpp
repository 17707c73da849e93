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

#include "qcbm/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "qcbm/rng.hpp"

namespace qcbm {

namespace {

constexpr double kShift = std::numbers::pi / 2.0;

// Index of the loss-recording sample within an epoch's seed stream; gradient
// circuits use 0 .. 2P.
constexpr std::uint64_t kLossCircuit = ~std::uint64_t{0};

}  // namespace

void adam_step(AdamState& state, std::span<double> params, std::span<const double> gradient)
{
  if (params.size() != gradient.size() || params.size() != state.first_moment.size())
    throw std::invalid_argument("adam_step: parameter, gradient and moment sizes differ");
  const auto& c = state.config;
  ++state.step;
  const double t      = static_cast<double>(state.step);
  const double m_corr = 1.0 - std::pow(c.beta1, t);
  const double v_corr = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& m = state.first_moment[i];
    auto& v = state.second_moment[i];
    m       = c.beta1 * m + (1.0 - c.beta1) * gradient[i];
    v       = c.beta2 * v + (1.0 - c.beta2) * gradient[i] * gradient[i];
    params[i] -= c.learning_rate * (m / m_corr) / (std::sqrt(v / v_corr) + c.epsilon);
  }
}

LossModel::LossModel(BinaryCode code, const DiscretizedSpace& space, KernelConfig cfg, std::span<const double> data)
    : code_(std::move(code)), space_(space), cfg_(std::move(cfg)), lattice_(space_, cfg_, data)
{
  if (code_.bits() != space_.bits()) throw std::invalid_argument("LossModel: code and space bit counts differ");
}

std::vector<std::uint64_t> LossModel::sample_representatives(const StateVector& state, std::size_t shots,
                                                             std::uint64_t seed) const
{
  auto sample = sample_shots(state, shots, seed);
  for (auto& b : sample.outcomes) b = code_.decode_value(b);
  return std::move(sample.outcomes);
}

IndexDistribution LossModel::model_distribution(const StateVector& state, GradientMode mode, std::size_t shots,
                                                std::uint64_t seed) const
{
  if (mode == GradientMode::exact) return IndexDistribution::from_probabilities(pushforward(born_probabilities(state), code_));
  return IndexDistribution::from_indices(sample_representatives(state, shots, seed), space_.size());
}

double LossModel::exact_loss(const CircuitParams& params) const
{
  const auto p = pushforward(born_probabilities(build_state(params)), code_);
  return lattice_.mmd2(IndexDistribution::from_probabilities(p));
}

GradientResult shift_gradient(const CircuitParams& params, const LossModel& model, std::size_t shots,
                              std::uint64_t seed, GradientMode mode)
{
  if (params.shape.qubits != model.code().bits())
    throw std::invalid_argument("shift_gradient: circuit and code bit counts differ");
  if (mode == GradientMode::shots && shots < 1) throw std::invalid_argument("shift_gradient: shots must be >= 1");

  const auto& lattice     = model.lattice();
  const std::size_t count = params.theta.size();
  const auto base = model.model_distribution(build_state(params), mode, shots, derive_seed(seed, SeedStream::shots, 0));

  GradientResult result;
  result.gradient.assign(count, 0.0);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    CircuitParams shifted = params;
    shifted.theta[i]      = params.theta[i] + kShift;
    const auto plus = model.model_distribution(build_state(shifted), mode, shots, derive_seed(seed, SeedStream::shots, 2 * i + 1));
    shifted.theta[i] = params.theta[i] - kShift;
    const auto minus = model.model_distribution(build_state(shifted), mode, shots, derive_seed(seed, SeedStream::shots, 2 * i + 2));
    result.gradient[i] = lattice.model_model(base, plus) - lattice.model_model(base, minus) - lattice.model_data(plus) +
                         lattice.model_data(minus);
  }
  result.circuit_evaluations = 2 * count + 1;
  return result;
}

GradientResult shift_gradient(const CircuitParams& params, std::span<const double> data, const BinaryCode& code,
                              const DiscretizedSpace& space, const KernelConfig& cfg, std::size_t shots,
                              std::uint64_t seed, GradientMode mode)
{
  const LossModel model(code, space, cfg, data);
  return shift_gradient(params, model, shots, seed, mode);
}

double reference_loss(std::span<const double> train, const TargetDistribution& target, const DiscretizedSpace& space,
                      const KernelConfig& cfg, std::uint64_t seed, std::size_t test_count, Estimator estimator)
{
  if (train.empty()) throw std::invalid_argument("reference_loss: empty training set");
  const std::size_t count = test_count == 0 ? train.size() : test_count;
  auto test = draw_samples(target, count, derive_seed(seed, SeedStream::reference));
  for (auto& x : test) x = space.representative(space.discretize(x));
  return mmd2(test, train, cfg, estimator);
}

double q_score(std::span<const double> history)
{
  if (history.empty()) throw std::invalid_argument("q_score: empty loss history");
  double sum = 0.0;
  for (double l : history) {
    if (!(l > 0.0)) throw std::domain_error("q_score: loss history contains a non-positive entry");
    sum += std::log(l);
  }
  return std::exp(sum / static_cast<double>(history.size()));
}

ClampedQ q_score_clamped(std::span<const double> history, double floor)
{
  std::vector<double> clamped(history.begin(), history.end());
  ClampedQ out;
  for (auto& l : clamped) {
    if (!(l >= floor)) {
      l = floor;
      ++out.clamped;
    }
  }
  out.q = q_score(clamped);
  return out;
}

void TrainingConfig::seed_all(std::uint64_t seed)
{
  dataset.seed = seed;
  seeds        = {seed, seed, seed, seed};
}

void TrainingConfig::validate() const
{
  if (circuit.qubits < 1 || circuit.qubits > 20) throw ConfigError("circuit.qubits: must be in [1, 20]");
  if (circuit.layers > 64) throw ConfigError("circuit.layers: must be <= 64");
  if (code == CodeKind::random && circuit.qubits > kDefaultRandomCap)
    throw ConfigError("code: random code supports at most " + std::to_string(kDefaultRandomCap) + " qubits");
  if (!(dataset.width > 0.0) || !std::isfinite(dataset.width)) throw ConfigError("dataset.width: must be positive");
  if (dataset.kind == DistributionKind::sawtooth_mixture && dataset.width >= 1.0)
    throw ConfigError("dataset.width: sawtooth width must be < 1");
  if (dataset.count < 1) throw ConfigError("dataset.count: must be >= 1");
  if (epochs < 1) throw ConfigError("training.epochs: must be >= 1");
  if (shots < 1) throw ConfigError("training.shots: must be >= 1");
  if (estimator == Estimator::unbiased && (shots < 2 || dataset.count < 2))
    throw ConfigError("training.estimator: unbiased estimator needs at least two shots and two samples");
  if (!(adam.learning_rate > 0.0)) throw ConfigError("training.learning_rate: must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0)) throw ConfigError("training.beta1: must be in [0, 1)");
  if (!(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) throw ConfigError("training.beta2: must be in [0, 1)");
  if (!(adam.epsilon > 0.0)) throw ConfigError("training.epsilon: must be positive");
  if (kernel.bandwidths.empty()) throw ConfigError("kernel.bandwidths: at least one bandwidth is required");
  for (std::size_t i = 0; i < kernel.bandwidths.size(); ++i)
    if (!(kernel.bandwidths[i] > 0.0))
      throw ConfigError("kernel.bandwidths[" + std::to_string(i) + "]: must be positive");
}

std::optional<std::size_t> TrainingRecord::epochs_to_reference() const
{
  for (std::size_t e = 0; e < losses.size(); ++e)
    if (losses[e] <= 2.0 * reference_loss) return e + 1;
  return std::nullopt;
}

TrainingRecord train(const TrainingConfig& config)
{
  config.validate();
  const auto& ds = config.dataset;
  return train(config, sample_dataset(ds.kind, ds.count, ds.width, ds.seed));
}

TrainingRecord train(const TrainingConfig& config, const Dataset& dataset)
{
  config.validate();
  using clock = std::chrono::steady_clock;

  const DiscretizedSpace space(config.circuit.qubits);
  const LossModel model(BinaryCode::make(config.code, config.circuit.qubits, config.seeds.code), space, config.kernel,
                        dataset.samples);

  TrainingRecord record;
  record.config         = config;
  record.reference_loss = reference_loss(dataset.samples, dataset.source, space, config.kernel, config.seeds.reference,
                                         config.reference_count, config.estimator);

  auto params = init_params(config.circuit, config.seeds.init);
  AdamState adam(params.theta.size(), config.adam);
  record.losses.reserve(config.epochs);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto start      = clock::now();
    const auto epoch_seed = derive_seed(config.seeds.shots, SeedStream::shots, epoch);

    const auto grad = shift_gradient(params, model, config.shots, epoch_seed, config.gradient_mode);
    adam_step(adam, params.theta, grad.gradient);

    const auto state = build_state(params);
    auto shots       = model.sample_representatives(state, config.shots, derive_seed(epoch_seed, SeedStream::shots, kLossCircuit));
    auto hist        = IndexDistribution::from_indices(shots, space.size());
    record.losses.push_back(model.lattice().mmd2(hist, config.estimator));
    if (config.exact_loss) record.exact_losses.push_back(model.exact_loss(params));
    if (epoch + 1 == config.epochs) record.synthetic = std::move(shots);

    record.epoch_ms.push_back(std::chrono::duration<double, std::milli>(clock::now() - start).count());
  }

  const auto q       = q_score_clamped(record.losses);
  record.q_score     = q.q;
  record.clamped     = q.clamped;
  record.final_theta = params.theta;
  return record;
}

}  // namespace qcbm
