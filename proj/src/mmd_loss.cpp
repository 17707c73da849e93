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

#include "qcbm/mmd_loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qcbm {

namespace {

constexpr std::size_t kRowBlock = 64;

struct Widths {
  std::vector<double> inv_two_sigma2;
};

Widths prepare(const KernelConfig& cfg)
{
  Widths w;
  for (double s : cfg.bandwidths) w.inv_two_sigma2.push_back(1.0 / (2.0 * s * s));
  return w;
}

inline double kernel_at(double d2, const Widths& w)
{
  double k = 0.0;
  for (double c : w.inv_two_sigma2) k += std::exp(-d2 * c);
  return k;
}

void check_nonempty(std::span<const double> s, const char* what)
{
  if (s.empty()) throw std::invalid_argument(std::string(what) + " sample set is empty");
}

}  // namespace

void KernelConfig::validate() const
{
  if (bandwidths.empty()) throw std::invalid_argument("kernel.bandwidths: at least one bandwidth is required");
  for (double s : bandwidths)
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("kernel.bandwidths: all bandwidths must be positive");
}

double kernel(double x, double y, const KernelConfig& cfg)
{
  double k = 0.0;
  for (double s : cfg.bandwidths) k += std::exp(-(x - y) * (x - y) / (2.0 * s * s));
  return k;
}

double kernel_sum(std::span<const double> a, std::span<const double> b, const KernelConfig& cfg)
{
  const Widths w            = prepare(cfg);
  const std::size_t blocks  = (a.size() + kRowBlock - 1) / kRowBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nblocks = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static) if (a.size() * b.size() >= (1u << 16))
  for (std::int64_t blk = 0; blk < nblocks; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kRowBlock;
    const std::size_t hi = std::min(a.size(), lo + kRowBlock);
    double acc           = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      double row = 0.0;
      for (double y : b) {
        const double d = a[i] - y;
        row += kernel_at(d * d, w);
      }
      acc += row;
    }
    partial[static_cast<std::size_t>(blk)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double mmd2(std::span<const double> model, std::span<const double> data, const KernelConfig& cfg, Estimator estimator)
{
  check_nonempty(model, "model");
  check_nonempty(data, "data");
  const auto nm = static_cast<double>(model.size());
  const auto nd = static_cast<double>(data.size());
  const double m = static_cast<double>(cfg.bandwidths.size());  // k(x, x)

  const double mm = kernel_sum(model, model, cfg);
  const double dd = kernel_sum(data, data, cfg);
  const double md = kernel_sum(model, data, cfg);
  if (estimator == Estimator::biased) return mm / (nm * nm) + dd / (nd * nd) - 2.0 * md / (nm * nd);

  if (model.size() < 2 || data.size() < 2)
    throw std::invalid_argument("unbiased MMD estimate needs at least two samples per set");
  return (mm - nm * m) / (nm * (nm - 1.0)) + (dd - nd * m) / (nd * (nd - 1.0)) - 2.0 * md / (nm * nd);
}

double mmd2_exact(std::span<const double> p, std::span<const double> data, const DiscretizedSpace& space,
                  const KernelConfig& cfg)
{
  if (p.size() != space.size()) throw std::invalid_argument("mmd2_exact: probability vector does not match space");
  check_nonempty(data, "data");
  const LatticeKernel lattice(space, cfg, data);
  return lattice.mmd2(IndexDistribution::from_probabilities(p));
}

Divergences diagnostics(std::span<const double> p, std::span<const double> q)
{
  if (p.size() != q.size()) throw std::invalid_argument("diagnostics: distributions differ in size");
  Divergences d;
  for (std::size_t j = 0; j < p.size(); ++j) {
    d.tv += std::abs(p[j] - q[j]);
    if (q[j] > 0.0) d.kl += q[j] * std::log(q[j] / std::max(p[j], kKlFloor));
  }
  d.tv *= 0.5;
  return d;
}

IndexDistribution IndexDistribution::from_indices(std::span<const std::uint64_t> indices, std::size_t size)
{
  if (indices.empty()) throw std::invalid_argument("histogram of zero samples");
  std::vector<std::uint32_t> counts(size, 0);
  for (auto i : indices) {
    if (i >= size) throw std::out_of_range("sample index outside the representative range");
    ++counts[i];
  }
  IndexDistribution dist;
  dist.samples     = indices.size();
  const double inv = 1.0 / static_cast<double>(indices.size());
  for (std::size_t j = 0; j < size; ++j) {
    if (counts[j] == 0) continue;
    dist.index.push_back(static_cast<std::uint32_t>(j));
    dist.weight.push_back(counts[j] * inv);
  }
  return dist;
}

IndexDistribution IndexDistribution::from_probabilities(std::span<const double> p)
{
  IndexDistribution dist;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    dist.index.push_back(static_cast<std::uint32_t>(j));
    dist.weight.push_back(p[j]);
  }
  return dist;
}

LatticeKernel::LatticeKernel(const DiscretizedSpace& space, const KernelConfig& cfg, std::span<const double> data)
{
  cfg.validate();
  check_nonempty(data, "data");
  const Widths w = prepare(cfg);
  const std::size_t size = space.size();
  row_.resize(size);
  for (std::size_t d = 0; d < size; ++d) {
    const double dist = space.cell_width() * static_cast<double>(d);
    row_[d]           = kernel_at(dist * dist, w);
  }

  data_count_ = data.size();
  data_expectation_.assign(size, 0.0);
  const auto reps   = space.representatives();
  const auto nsize  = static_cast<std::int64_t>(size);
  const double invn = 1.0 / static_cast<double>(data.size());
#pragma omp parallel for schedule(static) if (size * data.size() >= (1u << 16))
  for (std::int64_t j = 0; j < nsize; ++j) {
    double acc = 0.0;
    for (double y : data) {
      const double d = reps[static_cast<std::size_t>(j)] - y;
      acc += kernel_at(d * d, w);
    }
    data_expectation_[static_cast<std::size_t>(j)] = acc * invn;
  }
  data_sum_      = kernel_sum(data, data, cfg);
  data_diagonal_ = static_cast<double>(data.size()) * static_cast<double>(cfg.bandwidths.size());
}

double LatticeKernel::model_model(const IndexDistribution& a, const IndexDistribution& b) const
{
  double total = 0.0;
  for (std::size_t i = 0; i < a.index.size(); ++i) {
    const auto ja = static_cast<std::int64_t>(a.index[i]);
    double row    = 0.0;
    for (std::size_t k = 0; k < b.index.size(); ++k) {
      const auto d = static_cast<std::size_t>(std::abs(ja - static_cast<std::int64_t>(b.index[k])));
      row += b.weight[k] * row_[d];
    }
    total += a.weight[i] * row;
  }
  return total;
}

double LatticeKernel::model_data(const IndexDistribution& a) const
{
  double total = 0.0;
  for (std::size_t i = 0; i < a.index.size(); ++i) total += a.weight[i] * data_expectation_[a.index[i]];
  return total;
}

double LatticeKernel::data_data(Estimator estimator) const
{
  const auto n = static_cast<double>(data_count_);
  if (estimator == Estimator::biased) return data_sum_ / (n * n);
  if (data_count_ < 2) throw std::invalid_argument("unbiased MMD estimate needs at least two data samples");
  return (data_sum_ - data_diagonal_) / (n * (n - 1.0));
}

double LatticeKernel::mmd2(const IndexDistribution& model, Estimator estimator) const
{
  double mm = model_model(model, model);
  if (estimator == Estimator::unbiased) {
    if (model.samples < 2) throw std::invalid_argument("unbiased MMD estimate needs a histogram of at least two shots");
    const auto s = static_cast<double>(model.samples);
    // Weights are counts / s; drop the s self-pairs k(x, x) = row_[0].
    mm = (mm * s * s - s * row_[0]) / (s * (s - 1.0));
  }
  return mm + data_data(estimator) - 2.0 * model_data(model);
}

}  // namespace qcbm
