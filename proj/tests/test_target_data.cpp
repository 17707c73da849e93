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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "qcbm/rng.hpp"
#include "qcbm/target_data.hpp"

using namespace qcbm;

TEST_CASE("make_space examples")
{
  const auto s1 = make_space(1);
  CHECK(s1.size() == 2);
  CHECK(s1.representative(0) == -0.5);
  CHECK(s1.representative(1) == 0.5);
  CHECK(s1.cell_lower(0) == -1.0);
  CHECK(s1.cell_upper(0) == 0.0);
  CHECK(s1.cell_upper(1) == 1.0);

  const auto s2 = make_space(2);
  CHECK(std::vector<double>(s2.representatives().begin(), s2.representatives().end()) ==
        std::vector<double>{-0.75, -0.25, 0.25, 0.75});

  CHECK(make_space(8).cell_width() == doctest::Approx(2.0 / 256));
  CHECK(make_space(6).cell_width() == doctest::Approx(0.03125));
  CHECK_THROWS(make_space(0));
}

TEST_CASE("representatives are increasing and inside their cells")
{
  for (unsigned n = 1; n <= 12; ++n) {
    const auto s = make_space(n);
    for (std::size_t j = 0; j < s.size(); ++j) {
      CHECK(s.cell_lower(j) <= s.representative(j));
      CHECK(s.representative(j) < s.cell_upper(j));
      if (j) CHECK(s.representative(j - 1) < s.representative(j));
      if (j) CHECK(s.cell_upper(j - 1) == doctest::Approx(s.cell_lower(j)));
    }
  }
}

TEST_CASE("discretize examples")
{
  const auto s = make_space(2);
  CHECK(s.discretize(0.0) == 2);  // boundary between cells 1 and 2
  CHECK(s.discretize(-0.5) == 1);
  CHECK(s.discretize(0.5) == 3);
  CHECK(s.discretize(-0.25) == 1);
  CHECK(s.discretize(-0.8) == 0);
  CHECK(s.discretize(-1.0) == 0);
  CHECK(s.discretize(1.0) == 3);
  CHECK_THROWS(s.discretize(1.0001));
  CHECK_THROWS(s.discretize(-1.5));
  CHECK_THROWS(s.discretize(std::nan("")));
  for (unsigned n = 1; n <= 10; ++n) {
    const auto sp = make_space(n);
    for (std::size_t j = 0; j < sp.size(); ++j) CHECK(sp.discretize(sp.representative(j)) == j);
  }
}

TEST_CASE("discretize agrees with a nearest-representative search")
{
  const auto s = make_space(7);
  Rng rng(3);
  for (int t = 0; t < 5000; ++t) {
    const double x    = rng.uniform(-1.0, 1.0);
    std::size_t best  = 0;
    for (std::size_t j = 1; j < s.size(); ++j)
      if (std::abs(x - s.representative(j)) <= std::abs(x - s.representative(best))) best = j;
    REQUIRE(s.discretize(x) == best);
  }
}

TEST_CASE("centered Gaussian samples")
{
  const auto d = sample_centered_gaussian(256, 0.03, 4);
  CHECK(d.samples.size() == 256);
  double mean = 0.0;
  for (double x : d.samples) mean += x;
  mean /= 256;
  CHECK(std::abs(mean) < 5 * 0.03 / 16);
  CHECK(sample_centered_gaussian(256, 0.03, 4).samples == d.samples);
  CHECK(sample_centered_gaussian(256, 0.03, 5).samples != d.samples);

  // Wide distribution: out-of-range draws land exactly on the boundary.
  const auto wide = sample_centered_gaussian(2000, 2.0, 1);
  const auto ends = std::count_if(wide.samples.begin(), wide.samples.end(), [](double x) { return std::abs(x) == 1.0; });
  CHECK(ends > 0);
  for (double x : wide.samples) CHECK(std::abs(x) <= 1.0);
  CHECK_THROWS(sample_centered_gaussian(0, 0.03, 1));
  CHECK_THROWS(sample_centered_gaussian(10, 0.0, 1));
}

TEST_CASE("Gaussian mixture")
{
  SUBCASE("identity rescale when everything is inside")
  {
    const auto d = sample_gaussian_mixture(256, 0.001, 1);
    for (double mu : d.source.means) REQUIRE(std::abs(mu) < 0.99);
    CHECK(d.source.rescale.is_identity());
    // Same seed stream, raw draws unchanged.
    Rng rng(derive_seed(1, SeedStream::dataset));
    for (int c = 0; c < 3; ++c) rng.uniform();
    CHECK(d.samples.size() == 256);
  }
  SUBCASE("rescaling maps the data range into [-1, 1]")
  {
    bool saw_rescale = false;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto d = sample_gaussian_mixture(256, 0.3, seed);
      for (double x : d.samples) REQUIRE(std::abs(x) <= 1.0);
      if (!d.source.rescale.is_identity()) {
        saw_rescale = true;
        const auto [lo, hi] = std::minmax_element(d.samples.begin(), d.samples.end());
        CHECK((*lo == doctest::Approx(-1.0) || *hi == doctest::Approx(1.0)));
      }
    }
    CHECK(saw_rescale);
  }
  SUBCASE("component proportions")
  {
    const auto d = sample_gaussian_mixture(10000, 0.03, 8);
    std::vector<double> counts(3, 0.0);
    for (auto c : d.components) counts[c] += 1;
    const double sigma = std::sqrt(1.0 / 3 * 2.0 / 3 / 10000);
    for (double c : counts) CHECK(std::abs(c / 10000 - 1.0 / 3) < 5 * sigma);
  }
  SUBCASE("means uniform on [-1, 1] and reproducible")
  {
    const auto a = sample_gaussian_mixture(64, 0.03, 21);
    const auto b = sample_gaussian_mixture(64, 0.03, 21);
    CHECK(a.source.means == b.source.means);
    CHECK(a.samples == b.samples);
    CHECK(a.source.means.size() == 3);
    for (double mu : a.source.means) CHECK(std::abs(mu) <= 1.0);
  }
}

TEST_CASE("sawtooth mixture")
{
  const double nu = 0.05;
  const auto d    = sample_sawtooth_mixture(100000, nu, 2);
  const auto& mus = d.source.means;
  REQUIRE(mus.size() == 3);
  for (double mu : mus) {
    CHECK(mu >= -1 + nu);
    CHECK(mu <= 1 - nu);
  }

  SUBCASE("support")
  {
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
      const double mu = mus[d.components[i]];
      REQUIRE(d.samples[i] >= mu - nu);
      REQUIRE(d.samples[i] <= mu + nu);
    }
  }
  SUBCASE("per-component mean is mu - nu/3")
  {
    // Mean and variance of the triangular density by numerical integration.
    const auto tri  = [&](double x) { return (nu - x) / (2 * nu * nu); };  // centred at 0
    const double m1 = oracle::integrate([&](double x) { return x * tri(x); }, -nu, nu);
    const double m2 = oracle::integrate([&](double x) { return x * x * tri(x); }, -nu, nu);
    CHECK(m1 == doctest::Approx(-nu / 3).epsilon(1e-10));
    const double sd = std::sqrt(m2 - m1 * m1);
    for (std::size_t c = 0; c < 3; ++c) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < d.samples.size(); ++i)
        if (d.components[i] == c) {
          sum += d.samples[i];
          ++count;
        }
      CHECK(std::abs(sum / count - (mus[c] + m1)) < 5 * sd / std::sqrt(double(count)));
    }
  }
  SUBCASE("density at the edges")
  {
    TargetDistribution one{DistributionKind::sawtooth_mixture, nu, {0.0, 0.5, -0.5}, {}};
    CHECK(one.raw_density(-nu) == doctest::Approx(1.0 / (3 * nu)));
    CHECK(one.raw_density(nu) == 0.0);
    double total = 0.0;
    for (double mu : one.means)
      total += oracle::integrate([&](double x) { return one.raw_density(x); }, mu - nu, mu + nu);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("Kolmogorov-Smirnov statistic against the analytic CDF")
  {
    auto sorted = d.samples;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double f = d.source.cdf(sorted[i]);
      ks = std::max({ks, std::abs(f - double(i) / sorted.size()), std::abs(f - double(i + 1) / sorted.size())});
    }
    CHECK(ks < 0.01);
  }
}

TEST_CASE("discretized_target")
{
  SUBCASE("sums to one for every kind")
  {
    for (auto kind : {DistributionKind::centered_gaussian, DistributionKind::gaussian_mixture, DistributionKind::sawtooth_mixture}) {
      const auto d = sample_dataset(kind, 128, 0.03, 3);
      const auto q = discretized_target(d.source, make_space(8));
      double sum   = 0.0;
      for (double v : q) {
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  SUBCASE("uniform density gives 2^-n per cell")
  {
    const auto q = cell_masses([](double t) { return std::clamp((t + 1) / 2, 0.0, 1.0); }, make_space(5));
    for (double v : q) CHECK(v == doctest::Approx(1.0 / 32));
  }
  SUBCASE("narrow centred Gaussian sits on the two central cells")
  {
    const TargetDistribution narrow{DistributionKind::centered_gaussian, 1e-4, {0.0}, {}};
    const auto q = discretized_target(narrow, make_space(6));
    CHECK(q[31] + q[32] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q[31] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("entries match numerical integration of the density")
  {
    const auto d     = sample_sawtooth_mixture(10, 0.1, 7);
    const auto space = make_space(5);
    const auto q     = discretized_target(d.source, space);
    for (std::size_t j = 0; j < space.size(); ++j) {
      // Split at the density's kinks so Simpson's rule sees smooth pieces.
      std::vector<double> cuts{space.cell_lower(j), space.cell_upper(j)};
      for (double mu : d.source.means)
        for (double c : {mu - 0.1, mu + 0.1})
          if (c > cuts.front() && c < cuts[1]) cuts.push_back(c);
      std::sort(cuts.begin(), cuts.end());
      double ref = 0.0;
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        ref += oracle::integrate([&](double x) { return d.source.raw_density(x); }, cuts[k] + 1e-13,
                                 cuts[k + 1] - 1e-13);
      CHECK(q[j] == doctest::Approx(ref).epsilon(1e-6));
    }
  }
  SUBCASE("clipped tails collect in the end cells")
  {
    const TargetDistribution wide{DistributionKind::centered_gaussian, 1.0, {0.0}, {}};
    const auto q = discretized_target(wide, make_space(3));
    CHECK(q[0] > q[1]);
    CHECK(q[7] == doctest::Approx(q[0]));
  }
  SUBCASE("Monte Carlo histogram matches")
  {
    const auto space = make_space(6);
    // Fresh draws from a fixed (rescaled) target; the training set itself
    // always has its extremes pinned to the ends by the rescale fit.
    const auto d     = sample_gaussian_mixture(1000, 0.1, 12);
    const auto q     = discretized_target(d.source, space);
    std::vector<double> hist(space.size(), 0.0);
    for (double x : draw_samples(d.source, 1000000, 5)) hist[space.discretize(x)] += 1;
    for (std::size_t j = 0; j < space.size(); ++j)
      CHECK(std::abs(hist[j] / 1e6 - q[j]) <= 5 * std::sqrt(q[j] / 1e6) + 1e-12);
  }
}

TEST_CASE("pushforward and pullback")
{
  const std::vector<double> p{0.1, 0.2, 0.3, 0.05, 0.05, 0.1, 0.15, 0.05};
  CHECK(pushforward(p, BinaryCode::standard(3)) == p);

  std::vector<double> point(8, 0.0);
  point[0b100] = 1.0;
  const auto pf = pushforward(point, BinaryCode::reflected_gray(3));
  CHECK(pf[7] == 1.0);

  for (auto kind : {CodeKind::standard, CodeKind::random, CodeKind::reflected_gray, CodeKind::monotone_gray}) {
    const auto code = BinaryCode::make(kind, 3, 4);
    auto a          = pushforward(p, code);
    double sum      = 0.0;
    for (double v : a) sum += v;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(pushforward(pullback(p, code), code) == p);
    CHECK(pullback(pushforward(p, code), code) == p);
    auto sa = a, sp = p;
    std::sort(sa.begin(), sa.end());
    std::sort(sp.begin(), sp.end());
    CHECK(sa == sp);
    for (std::uint64_t j = 0; j < 8; ++j) CHECK(a[j] == p[code.encode_value(j)]);
  }
  CHECK_THROWS(pushforward(std::vector<double>(4, 0.25), BinaryCode::standard(3)));
}

TEST_CASE("dataset CSV round trip")
{
  const auto dir = std::filesystem::temp_directory_path() / "qcbm_test_dataset";
  std::filesystem::create_directories(dir);
  const auto d = sample_gaussian_mixture(100, 0.3, 5);
  save_dataset(d, dir / "d.csv");
  const auto back = load_dataset(dir / "d.csv");
  CHECK(back.samples == d.samples);
  CHECK(back.seed == d.seed);
  CHECK(back.source.means == d.source.means);
  CHECK(back.source.rescale.scale == d.source.rescale.scale);
  CHECK(back.source.rescale.offset == d.source.rescale.offset);
  CHECK(back.source.kind == d.source.kind);
  std::filesystem::remove_all(dir);
}

TEST_CASE("held-out draws follow the rescaled, clipped target")
{
  const auto d = sample_gaussian_mixture(200, 0.3, 6);
  const auto t = draw_samples(d.source, 50000, 99);
  for (double x : t) REQUIRE(std::abs(x) <= 1.0);
  const auto space = make_space(4);
  const auto q     = discretized_target(d.source, space);
  std::vector<double> hist(space.size(), 0.0);
  for (double x : t) hist[space.discretize(x)] += 1;
  for (std::size_t j = 0; j < space.size(); ++j)
    CHECK(std::abs(hist[j] / 50000 - q[j]) <= 5 * std::sqrt(q[j] / 50000) + 1e-12);
}
