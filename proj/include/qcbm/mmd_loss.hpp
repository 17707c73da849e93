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
#include <span>
#include <vector>

#include "qcbm/target_data.hpp"

namespace qcbm {

/// Sum of Gaussian kernels exp(-(x - y)^2 / (2 sigma_i^2)).
struct KernelConfig {
  std::vector<double> bandwidths{0.003, 0.01, 0.03, 0.1, 0.3};

  void validate() const;

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

/// biased: V-statistic, all pairs including i == j.
/// unbiased: U-statistic, self-pairs dropped from the two within-set terms.
enum class Estimator { biased, unbiased };

double kernel(double x, double y, const KernelConfig& cfg);

/// sum_{a in A, b in B} k(a, b). Rows are split across OpenMP threads in
/// fixed-size blocks and the block partials are added in block order, so the
/// result does not depend on the thread count.
double kernel_sum(std::span<const double> a, std::span<const double> b, const KernelConfig& cfg);

double mmd2(std::span<const double> model, std::span<const double> data, const KernelConfig& cfg,
            Estimator estimator = Estimator::biased);

/// Model expectations taken exactly under `p` (indexed by representative),
/// data expectations over the raw samples.
double mmd2_exact(std::span<const double> p, std::span<const double> data, const DiscretizedSpace& space,
                  const KernelConfig& cfg);

struct Divergences {
  double kl = 0.0;
  double tv = 0.0;
};

inline constexpr double kKlFloor = 1e-12;

/// TV = 1/2 sum |p - q|, KL(q || p) = sum q log(q / max(p, 1e-12)).
Divergences diagnostics(std::span<const double> p, std::span<const double> q);

/// Sparse distribution over representative indices (a shot histogram or a
/// probability vector with zero entries dropped).
struct IndexDistribution {
  std::vector<std::uint32_t> index;
  std::vector<double> weight;
  std::size_t samples = 0;  // number of shots behind a histogram, 0 if exact

  static IndexDistribution from_indices(std::span<const std::uint64_t> indices, std::size_t size);
  static IndexDistribution from_probabilities(std::span<const double> p);
};

/// Kernel evaluation specialised to model values on a uniform grid of
/// representatives. Because k(x_j, x_k) depends on |j - k| only, the
/// model-model term needs a single row of 2^n kernel values, and the
/// model-data term a precomputed vector of data expectations per
/// representative.
class LatticeKernel {
 public:
  LatticeKernel(const DiscretizedSpace& space, const KernelConfig& cfg, std::span<const double> data);

  /// E_{x~a, y~b} k(x, y).
  double model_model(const IndexDistribution& a, const IndexDistribution& b) const;
  /// E_{x~a, d~data} k(x, d).
  double model_data(const IndexDistribution& a) const;
  /// E_{d, d'~data} k(d, d'), or the U-statistic version.
  double data_data(Estimator estimator = Estimator::biased) const;

  /// Loss of a model histogram against the stored data. With the unbiased
  /// estimator `model.samples` must be > 1.
  double mmd2(const IndexDistribution& model, Estimator estimator = Estimator::biased) const;

  std::size_t size() const { return row_.size(); }
  std::span<const double> data_expectation() const { return data_expectation_; }

 private:
  std::vector<double> row_;               // k at lattice distance d
  std::vector<double> data_expectation_;  // E_d k(x_j, d)
  double data_sum_      = 0.0;            // sum over all data pairs
  double data_diagonal_ = 0.0;            // sum of k(d, d)
  std::size_t data_count_ = 0;
};

namespace reference {

double kernel_sum(std::span<const double> a, std::span<const double> b, const KernelConfig& cfg);

}  // namespace reference

}  // namespace qcbm
