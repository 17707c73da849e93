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

// Independent reference computations used only by the tests. Nothing here
// calls into the library's kernels.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

inline double kernel(double x, double y, const std::vector<double>& sigmas)
{
  double k = 0.0;
  for (double s : sigmas) k += std::exp(-(x - y) * (x - y) / (2.0 * s * s));
  return k;
}

// Plain triple double sum, V-statistic.
inline double mmd2(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& sigmas)
{
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (double x : a)
    for (double y : a) aa += kernel(x, y, sigmas);
  for (double x : b)
    for (double y : b) bb += kernel(x, y, sigmas);
  for (double x : a)
    for (double y : b) ab += kernel(x, y, sigmas);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  return aa / (na * na) + bb / (nb * nb) - 2.0 * ab / (na * nb);
}

inline double mmd2_unbiased(const std::vector<double>& a, const std::vector<double>& b,
                            const std::vector<double>& sigmas)
{
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j) aa += kernel(a[i], a[j], sigmas);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (i != j) bb += kernel(b[i], b[j], sigmas);
  for (double x : a)
    for (double y : b) ab += kernel(x, y, sigmas);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  return aa / (na * (na - 1)) + bb / (nb * (nb - 1)) - 2.0 * ab / (na * nb);
}

// Weighted model over representatives against raw data.
inline double mmd2_weighted(const std::vector<double>& p, const std::vector<double>& reps,
                            const std::vector<double>& data, const std::vector<double>& sigmas)
{
  double mm = 0.0, md = 0.0, dd = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) mm += p[i] * p[j] * kernel(reps[i], reps[j], sigmas);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (double d : data) md += p[i] * kernel(reps[i], d, sigmas);
  for (double x : data)
    for (double y : data) dd += kernel(x, y, sigmas);
  const double n = static_cast<double>(data.size());
  return mm + dd / (n * n) - 2.0 * md / n;
}

// Dense-matrix circuit simulator: builds every gate as a full 2^n x 2^n
// matrix and multiplies. Qubit q is the 2^q place.
using Matrix = std::vector<std::vector<double>>;

inline Matrix identity(std::size_t d)
{
  Matrix m(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1.0;
  return m;
}

inline Matrix ry_matrix(unsigned n, unsigned q, double theta)
{
  const std::size_t d = std::size_t{1} << n;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix m(d, std::vector<double>(d, 0.0));
  for (std::size_t col = 0; col < d; ++col) {
    const std::size_t bit = (col >> q) & 1U;
    const std::size_t other = col ^ (std::size_t{1} << q);
    // [[c, -s], [s, c]] acting on the q-th tensor factor.
    if (bit == 0) {
      m[col][col] += c;
      m[other][col] += s;
    } else {
      m[col][col] += c;
      m[other][col] -= s;
    }
  }
  return m;
}

inline Matrix cnot_matrix(unsigned n, unsigned control, unsigned target)
{
  const std::size_t d = std::size_t{1} << n;
  Matrix m(d, std::vector<double>(d, 0.0));
  for (std::size_t col = 0; col < d; ++col) {
    const std::size_t row = ((col >> control) & 1U) ? col ^ (std::size_t{1} << target) : col;
    m[row][col] = 1.0;
  }
  return m;
}

inline std::vector<double> multiply(const Matrix& m, const std::vector<double>& v)
{
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

// theta is layer-major; the first layer gets +pi/2 when `offset` is set.
inline std::vector<double> circuit_state(unsigned n, unsigned layers, const std::vector<double>& theta, bool offset)
{
  std::vector<double> v(std::size_t{1} << n, 0.0);
  v[0] = 1.0;
  for (unsigned l = 0; l <= layers; ++l) {
    for (unsigned q = 0; q < n; ++q)
      v = multiply(ry_matrix(n, q, theta[l * n + q] + (l == 0 && offset ? M_PI / 2 : 0.0)), v);
    if (l == layers) break;
    for (unsigned q = 0; q + 1 < n; q += 2) v = multiply(cnot_matrix(n, q, q + 1), v);
    for (unsigned q = 1; q + 1 < n; q += 2) v = multiply(cnot_matrix(n, q, q + 1), v);
  }
  return v;
}

// Central finite differences of f at x.
inline std::vector<double> finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                             std::vector<double> x, double h)
{
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i]            = x0 + h;
    const double fp = f(x);
    x[i]            = x0 - h;
    const double fm = f(x);
    x[i]            = x0;
    g[i]            = (fp - fm) / (2.0 * h);
  }
  return g;
}

// All Hamiltonian paths through the n-cube that start at 0 and satisfy the
// Gray and almost-monotone properties, found by backtracking.
inline void monotone_gray_paths(unsigned n, std::vector<std::vector<std::uint64_t>>& out, std::size_t limit = 100000)
{
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint64_t> path{0};
  std::vector<bool> used(size, false);
  used[0] = true;
  std::function<void()> extend = [&] {
    if (out.size() >= limit) return;
    if (path.size() == size) {
      // Weight never drops more than one below any earlier weight.
      int max_seen = 0;
      for (auto v : path) {
        const int w = std::popcount(v);
        if (w < max_seen - 1) return;
        max_seen = std::max(max_seen, w);
      }
      out.push_back(path);
      return;
    }
    int max_seen = 0;
    for (auto v : path) max_seen = std::max(max_seen, std::popcount(v));
    for (unsigned b = 0; b < n; ++b) {
      const auto next = path.back() ^ (std::uint64_t{1} << b);
      if (used[next] || std::popcount(next) < max_seen - 1) continue;
      used[next] = true;
      path.push_back(next);
      extend();
      path.pop_back();
      used[next] = false;
    }
  };
  extend();
}

// Reduced fraction for exact comparisons.
struct Fraction {
  std::uint64_t num, den;
};

inline Fraction reduce(std::uint64_t num, std::uint64_t den)
{
  const auto g = std::gcd(num, den);
  return {num / g, den / g};
}

// Simpson integration of f on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int intervals = 2000)
{
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s       = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
