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

#include "qcbm/target_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qcbm/rng.hpp"

namespace qcbm {

namespace {

constexpr std::size_t kMixtureComponents = 3;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double clip(double x) { return std::clamp(x, -1.0, 1.0); }

void check_count_width(std::size_t count, double width)
{
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("distribution width must be positive");
}

Dataset draw_dataset(TargetDistribution target, std::size_t count, std::uint64_t seed, Rng& rng)
{
  Dataset ds{{}, std::move(target), seed, {}};
  ds.samples.reserve(count);
  const bool mixture = ds.source.means.size() > 1;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t c = 0;
    ds.samples.push_back(ds.source.draw(rng, &c));
    if (mixture) ds.components.push_back(static_cast<std::uint8_t>(c));
  }
  return ds;
}

}  // namespace

DiscretizedSpace::DiscretizedSpace(unsigned n) : n_(n)
{
  if (n < 1 || n > 30) throw std::invalid_argument("discretized space needs 1 <= n <= 30");
  const std::size_t size = std::size_t{1} << n;
  width_                 = 2.0 / static_cast<double>(size);
  representatives_.resize(size);
  for (std::size_t j = 0; j < size; ++j) representatives_[j] = -1.0 + width_ * (static_cast<double>(j) + 0.5);
}

std::size_t DiscretizedSpace::discretize(double x) const
{
  if (!(x >= -1.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "discretize: value " << x << " outside [-1, 1]";
    throw std::out_of_range(msg.str());
  }
  const auto j = static_cast<std::size_t>(std::floor((x + 1.0) / width_));
  return std::min(j, size() - 1);
}

DiscretizedSpace make_space(unsigned n) { return DiscretizedSpace(n); }

std::string_view distribution_name(DistributionKind kind)
{
  switch (kind) {
    case DistributionKind::centered_gaussian: return "centered_gaussian";
    case DistributionKind::gaussian_mixture: return "gaussian_mixture";
    case DistributionKind::sawtooth_mixture: return "sawtooth_mixture";
  }
  return "?";
}

DistributionKind parse_distribution_kind(std::string_view name)
{
  if (name == "centered_gaussian") return DistributionKind::centered_gaussian;
  if (name == "gaussian_mixture") return DistributionKind::gaussian_mixture;
  if (name == "sawtooth_mixture") return DistributionKind::sawtooth_mixture;
  throw std::invalid_argument("unknown dataset kind '" + std::string(name) +
                              "' (expected centered_gaussian, gaussian_mixture or sawtooth_mixture)");
}

double TargetDistribution::raw_density(double x) const
{
  const double weight = 1.0 / static_cast<double>(means.size());
  double total        = 0.0;
  for (double mu : means) {
    if (kind == DistributionKind::sawtooth_mixture) {
      const double right = width + mu - x;
      if (right > 0.0 && (width - mu + x) >= 0.0) total += weight * right / (2.0 * width * width);
    } else {
      const double z = (x - mu) / width;
      total += weight * std::exp(-0.5 * z * z) / (width * std::sqrt(2.0 * std::numbers::pi));
    }
  }
  return total;
}

double TargetDistribution::raw_cdf(double x) const
{
  const double weight = 1.0 / static_cast<double>(means.size());
  double total        = 0.0;
  for (double mu : means) {
    if (kind == DistributionKind::sawtooth_mixture) {
      if (x >= mu + width) {
        total += weight;
      } else if (x > mu - width) {
        const double r = (mu + width - x) / (2.0 * width);
        total += weight * (1.0 - r * r);
      }
    } else {
      total += weight * normal_cdf((x - mu) / width);
    }
  }
  return total;
}

double TargetDistribution::cdf(double t) const { return raw_cdf((t - rescale.offset) / rescale.scale); }

double TargetDistribution::draw(Rng& rng, std::size_t* component) const
{
  const std::size_t c = means.size() > 1 ? static_cast<std::size_t>(rng.below(means.size())) : 0;
  if (component) *component = c;
  const double mu = means[c];
  double x;
  if (kind == DistributionKind::sawtooth_mixture) {
    x = mu + width - 2.0 * width * std::sqrt(1.0 - rng.uniform());
  } else {
    x = rng.normal(mu, width);
  }
  return clip(rescale.apply(x));
}

Dataset sample_centered_gaussian(std::size_t count, double width, std::uint64_t seed)
{
  check_count_width(count, width);
  Rng rng(derive_seed(seed, SeedStream::dataset));
  TargetDistribution target{DistributionKind::centered_gaussian, width, {0.0}, {}};
  return draw_dataset(std::move(target), count, seed, rng);
}

Dataset sample_gaussian_mixture(std::size_t count, double width, std::uint64_t seed)
{
  check_count_width(count, width);
  Rng rng(derive_seed(seed, SeedStream::dataset));
  TargetDistribution target{DistributionKind::gaussian_mixture, width, {}, {}};
  for (std::size_t i = 0; i < kMixtureComponents; ++i) target.means.push_back(rng.uniform(-1.0, 1.0));

  // Raw draws first; the rescale is decided from their range.
  Dataset ds{{}, target, seed, {}};
  for (std::size_t i = 0; i < count; ++i) {
    const auto c = static_cast<std::size_t>(rng.below(kMixtureComponents));
    ds.components.push_back(static_cast<std::uint8_t>(c));
    ds.samples.push_back(rng.normal(target.means[c], width));
  }
  const auto [lo_it, hi_it] = std::minmax_element(ds.samples.begin(), ds.samples.end());
  const double lo           = std::min(-1.0, *lo_it);
  const double hi           = std::max(1.0, *hi_it);
  if (lo < -1.0 || hi > 1.0) {
    const double scale       = 2.0 / (hi - lo);
    ds.source.rescale.scale  = scale;
    ds.source.rescale.offset = -1.0 - scale * lo;
  }
  for (auto& x : ds.samples) x = clip(ds.source.rescale.apply(x));
  return ds;
}

Dataset sample_sawtooth_mixture(std::size_t count, double width, std::uint64_t seed)
{
  check_count_width(count, width);
  if (width >= 1.0) throw std::invalid_argument("sawtooth width must be < 1");
  Rng rng(derive_seed(seed, SeedStream::dataset));
  TargetDistribution target{DistributionKind::sawtooth_mixture, width, {}, {}};
  for (std::size_t i = 0; i < kMixtureComponents; ++i) target.means.push_back(rng.uniform(-1.0 + width, 1.0 - width));
  return draw_dataset(std::move(target), count, seed, rng);
}

Dataset sample_dataset(DistributionKind kind, std::size_t count, double width, std::uint64_t seed)
{
  switch (kind) {
    case DistributionKind::centered_gaussian: return sample_centered_gaussian(count, width, seed);
    case DistributionKind::gaussian_mixture: return sample_gaussian_mixture(count, width, seed);
    case DistributionKind::sawtooth_mixture: return sample_sawtooth_mixture(count, width, seed);
  }
  throw std::invalid_argument("unknown dataset kind");
}

std::vector<double> draw_samples(const TargetDistribution& target, std::size_t count, std::uint64_t seed)
{
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = target.draw(rng);
  return out;
}

std::vector<double> cell_masses(const std::function<double(double)>& cdf, const DiscretizedSpace& space)
{
  std::vector<double> mass(space.size());
  double below = 0.0;  // everything left of cell 0 is clipped into it
  for (std::size_t j = 0; j + 1 < space.size(); ++j) {
    const double upper = cdf(space.cell_upper(j));
    mass[j]            = upper - below;
    below              = upper;
  }
  mass.back() = 1.0 - below;
  return mass;
}

std::vector<double> discretized_target(const TargetDistribution& target, const DiscretizedSpace& space)
{
  return cell_masses([&](double t) { return target.cdf(t); }, space);
}

std::vector<double> pushforward(std::span<const double> bitstring_probabilities, const BinaryCode& code)
{
  if (bitstring_probabilities.size() != code.size())
    throw std::invalid_argument("pushforward: probability vector size does not match the code");
  std::vector<double> out(code.size());
  for (std::uint64_t j = 0; j < code.size(); ++j) out[j] = bitstring_probabilities[code.encode_value(j)];
  return out;
}

std::vector<double> pullback(std::span<const double> representative_probabilities, const BinaryCode& code)
{
  if (representative_probabilities.size() != code.size())
    throw std::invalid_argument("pullback: probability vector size does not match the code");
  std::vector<double> out(code.size());
  for (std::uint64_t b = 0; b < code.size(); ++b) out[b] = representative_probabilities[code.decode_value(b)];
  return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& csv_path)
{
  {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    csv << std::setprecision(17);
    for (double x : dataset.samples) csv << x << '\n';
  }
  nlohmann::ordered_json meta;
  meta["kind"]           = distribution_name(dataset.source.kind);
  meta["width"]          = dataset.source.width;
  meta["means"]          = dataset.source.means;
  meta["rescale"]        = {{"scale", dataset.source.rescale.scale}, {"offset", dataset.source.rescale.offset}};
  meta["seed"]           = dataset.seed;
  meta["count"]          = dataset.samples.size();
  std::ofstream sidecar(csv_path.string() + ".json");
  sidecar << meta.dump(2) << '\n';
}

Dataset load_dataset(const std::filesystem::path& csv_path)
{
  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot read " + csv_path.string());
  std::ifstream sidecar(csv_path.string() + ".json");
  if (!sidecar) throw std::runtime_error("missing sidecar " + csv_path.string() + ".json");
  const auto meta = nlohmann::json::parse(sidecar);

  Dataset ds;
  ds.source.kind           = parse_distribution_kind(meta.at("kind").get<std::string>());
  ds.source.width          = meta.at("width").get<double>();
  ds.source.means          = meta.at("means").get<std::vector<double>>();
  ds.source.rescale.scale  = meta.at("rescale").at("scale").get<double>();
  ds.source.rescale.offset = meta.at("rescale").at("offset").get<double>();
  ds.seed                  = meta.at("seed").get<std::uint64_t>();
  std::string line;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    ds.samples.push_back(std::stod(line));
  }
  return ds;
}

}  // namespace qcbm
