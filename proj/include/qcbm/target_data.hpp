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
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcbm/codes.hpp"

namespace qcbm {

/// 2^n equal cells covering [-1, 1]; representative j is the centre of cell j.
/// Cell j is [-1 + 2j/2^n, -1 + 2(j+1)/2^n), the last cell also contains 1.
class DiscretizedSpace {
 public:
  explicit DiscretizedSpace(unsigned n);

  unsigned bits() const { return n_; }
  std::size_t size() const { return representatives_.size(); }
  double cell_width() const { return width_; }
  double representative(std::size_t j) const { return representatives_[j]; }
  std::span<const double> representatives() const { return representatives_; }
  double cell_lower(std::size_t j) const { return -1.0 + width_ * static_cast<double>(j); }
  double cell_upper(std::size_t j) const { return -1.0 + width_ * static_cast<double>(j + 1); }

  /// Index of the nearest representative; a point exactly between two
  /// representatives goes to the larger index. Throws outside [-1, 1].
  std::size_t discretize(double x) const;

 private:
  unsigned n_;
  double width_;
  std::vector<double> representatives_;
};

DiscretizedSpace make_space(unsigned n);

enum class DistributionKind { centered_gaussian, gaussian_mixture, sawtooth_mixture };

std::string_view distribution_name(DistributionKind kind);
DistributionKind parse_distribution_kind(std::string_view name);

/// x -> scale * x + offset, applied to raw draws before clipping to [-1, 1].
struct AffineMap {
  double scale  = 1.0;
  double offset = 0.0;

  double apply(double x) const { return scale * x + offset; }
  bool is_identity() const { return scale == 1.0 && offset == 0.0; }
};

/// Target density on [-1, 1]. Mixtures have equal component weights.
/// Values are drawn from the raw density, mapped through `rescale` and then
/// clipped to [-1, 1], so the mass beyond either end lands on the boundary.
struct TargetDistribution {
  DistributionKind kind = DistributionKind::centered_gaussian;
  double width          = 0.03;  // standard deviation, or sawtooth half-width
  std::vector<double> means{0.0};
  AffineMap rescale;

  /// Density of the raw (unscaled, unclipped) variable.
  double raw_density(double x) const;
  double raw_cdf(double x) const;

  /// P(rescale(X) <= t), before clipping.
  double cdf(double t) const;

  /// One clipped draw; `component` receives the mixture component index.
  double draw(class Rng& rng, std::size_t* component = nullptr) const;
};

struct Dataset {
  std::vector<double> samples;
  TargetDistribution source;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> components;  // mixture component per sample
};

/// Clipped Normal(0, width^2) draws.
Dataset sample_centered_gaussian(std::size_t count, double width, std::uint64_t seed);

/// Three components with means uniform on [-1, 1]; if any draw leaves
/// [-1, 1], every sample is mapped affinely so that
/// [min(-1, min x), max(1, max x)] becomes [-1, 1].
Dataset sample_gaussian_mixture(std::size_t count, double width, std::uint64_t seed);

/// Three decreasing triangular components on [mu - w, mu + w], means uniform
/// on [-1 + w, 1 - w], drawn by inverse CDF x = mu + w - 2w sqrt(1 - u).
Dataset sample_sawtooth_mixture(std::size_t count, double width, std::uint64_t seed);

Dataset sample_dataset(DistributionKind kind, std::size_t count, double width, std::uint64_t seed);

/// Fresh draws from an existing target (used for held-out test sets).
std::vector<double> draw_samples(const TargetDistribution& target, std::size_t count, std::uint64_t seed);

/// Integral of the density over each cell; the end cells also collect the
/// clipped tails.
std::vector<double> discretized_target(const TargetDistribution& target, const DiscretizedSpace& space);

/// Same, for any CDF on the real line.
std::vector<double> cell_masses(const std::function<double(double)>& cdf, const DiscretizedSpace& space);

/// Entry j is p[f(j)]: bitstring probabilities re-indexed by representative.
std::vector<double> pushforward(std::span<const double> bitstring_probabilities, const BinaryCode& code);

/// Entry b is q[f^{-1}(b)]: representative probabilities re-indexed by bitstring.
std::vector<double> pullback(std::span<const double> representative_probabilities, const BinaryCode& code);

/// CSV with one value per line (17 significant digits) plus `<path>.json`
/// holding kind, width, means, rescale and seed.
void save_dataset(const Dataset& dataset, const std::filesystem::path& csv_path);
Dataset load_dataset(const std::filesystem::path& csv_path);

}  // namespace qcbm
