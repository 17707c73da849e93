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

#include "qcbm/codes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qcbm/rng.hpp"

namespace qcbm {

namespace {

void check_bits(unsigned n, unsigned cap = kMaxCodeBits)
{
  if (n < 1 || n > cap) {
    throw std::invalid_argument("bit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(cap) + "]");
  }
}

void check_index(std::uint64_t index, unsigned n)
{
  check_bits(n);
  if (index >= (std::uint64_t{1} << n)) {
    throw std::out_of_range("index " + std::to_string(index) + " out of range for n = " +
                            std::to_string(n));
  }
}

std::uint64_t prefix_xor_decode(std::uint64_t g)
{
  // b_j = b_{j+1} xor g_j, starting from the most-significant bit.
  std::uint64_t b = g;
  for (unsigned shift = 1; shift < 64; shift <<= 1) b ^= b >> shift;
  return b;
}

// Tuple form of the recursion: position k of a length-m tuple is bit m-1-k.
std::vector<unsigned> rotation_permutation(unsigned m)
{
  std::vector<unsigned> perm{0};
  for (unsigned len = 2; len <= m; ++len) {
    std::vector<unsigned> x = perm;
    x.push_back(len - 1);
    std::vector<unsigned> y(len);
    for (unsigned k = 0; k < len; ++k) y[k] = x[x[k]];
    std::rotate(y.rbegin(), y.rbegin() + 1, y.rend());
    perm = std::move(y);
  }
  return perm;
}

std::uint64_t permute_tuple(std::uint64_t x, const std::vector<unsigned>& perm, unsigned len)
{
  std::uint64_t y = 0;
  for (unsigned k = 0; k < len; ++k) {
    const std::uint64_t b = (x >> (len - 1 - perm[k])) & 1U;
    y |= b << (len - 1 - k);
  }
  return y;
}

std::vector<std::uint64_t> build_monotone_gray(unsigned n)
{
  // level[j] holds the path P(m, j) through weights j and j+1.
  std::vector<std::vector<std::uint64_t>> level{{0, 1}};
  for (unsigned m = 2; m <= n; ++m) {
    const auto perm = rotation_permutation(m - 1);
    std::vector<std::vector<std::uint64_t>> next(m);
    for (unsigned j = 0; j < m; ++j) {
      auto& out = next[j];
      if (j >= 1) {
        for (auto x : level[j - 1]) out.push_back((std::uint64_t{1} << (m - 1)) | permute_tuple(x, perm, m - 1));
      }
      if (j + 1 < m) out.insert(out.end(), level[j].begin(), level[j].end());
    }
    level = std::move(next);
  }
  std::vector<std::uint64_t> seq;
  seq.reserve(std::size_t{1} << n);
  for (unsigned i = 0; i < n; ++i) {
    if (i % 2 == 0)
      seq.insert(seq.end(), level[i].begin(), level[i].end());
    else
      seq.insert(seq.end(), level[i].rbegin(), level[i].rend());
  }
  return seq;
}

struct MonotoneCache {
  std::mutex mutex;
  std::map<unsigned, std::shared_ptr<const std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>>> tables;
};

MonotoneCache& monotone_cache()
{
  static MonotoneCache cache;
  return cache;
}

std::shared_ptr<const std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> monotone_tables(unsigned n)
{
  check_bits(n, 32);
  auto& cache = monotone_cache();
  std::lock_guard lock(cache.mutex);
  auto& slot = cache.tables[n];
  if (!slot) {
    auto forward = build_monotone_gray(n);
    std::vector<std::uint64_t> inverse(forward.size());
    for (std::uint64_t i = 0; i < forward.size(); ++i) inverse[forward[i]] = i;
    slot = std::make_shared<const std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>>(
        std::move(forward), std::move(inverse));
  }
  return slot;
}

}  // namespace

std::string Bitstring::to_string() const
{
  std::string s(width, '0');
  for (unsigned i = 0; i < width; ++i)
    if (bit(i)) s[width - 1 - i] = '1';
  return s;
}

Bitstring Bitstring::parse(std::string_view text)
{
  if (text.empty() || text.size() > 64) throw std::invalid_argument("bitstring length must be in [1, 64]");
  Bitstring b{0, static_cast<unsigned>(text.size())};
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("bitstring may only contain 0 and 1");
    b.value = (b.value << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return b;
}

unsigned hamming(const Bitstring& a, const Bitstring& b)
{
  if (a.width != b.width) throw std::invalid_argument("hamming: bitstring lengths differ");
  return static_cast<unsigned>(std::popcount(a.value ^ b.value));
}

unsigned hamming_weight(const Bitstring& b) { return static_cast<unsigned>(std::popcount(b.value)); }

Bitstring standard_encode(std::uint64_t index, unsigned n)
{
  check_index(index, n);
  return {index, n};
}

std::uint64_t standard_decode(const Bitstring& b) { return b.value; }

Bitstring rgc_encode(std::uint64_t index, unsigned n)
{
  check_index(index, n);
  return {index ^ (index >> 1), n};
}

std::uint64_t rgc_decode(const Bitstring& b) { return prefix_xor_decode(b.value); }

const std::vector<std::uint64_t>& monotone_gray_sequence(unsigned n) { return monotone_tables(n)->first; }

Bitstring mgc_encode(std::uint64_t index, unsigned n)
{
  check_index(index, n);
  return {monotone_tables(n)->first[index], n};
}

std::uint64_t mgc_decode(const Bitstring& b) { return monotone_tables(b.width)->second.at(b.value); }

std::string_view code_name(CodeKind kind)
{
  switch (kind) {
    case CodeKind::standard: return "sc";
    case CodeKind::random: return "rc";
    case CodeKind::reflected_gray: return "rgc";
    case CodeKind::monotone_gray: return "mgc";
  }
  return "?";
}

CodeKind parse_code_kind(std::string_view name)
{
  if (name == "sc" || name == "standard") return CodeKind::standard;
  if (name == "rc" || name == "random") return CodeKind::random;
  if (name == "rgc" || name == "reflected_gray") return CodeKind::reflected_gray;
  if (name == "mgc" || name == "monotone_gray") return CodeKind::monotone_gray;
  throw std::invalid_argument("unknown code '" + std::string(name) + "' (expected sc, rc, rgc or mgc)");
}

BinaryCode BinaryCode::standard(unsigned n)
{
  check_bits(n);
  return {CodeKind::standard, n, Mode::identity, nullptr};
}

BinaryCode BinaryCode::reflected_gray(unsigned n)
{
  check_bits(n);
  return {CodeKind::reflected_gray, n, Mode::reflected, nullptr};
}

BinaryCode BinaryCode::monotone_gray(unsigned n)
{
  auto shared = monotone_tables(n);
  auto tables = std::make_shared<Tables>(Tables{shared->first, shared->second});
  return {CodeKind::monotone_gray, n, Mode::table, std::move(tables)};
}

BinaryCode BinaryCode::random(unsigned n, std::uint64_t seed, unsigned max_bits)
{
  check_bits(n, std::min(max_bits, kMaxCodeBits));
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint64_t> forward(size);
  std::iota(forward.begin(), forward.end(), std::uint64_t{0});
  Rng rng(derive_seed(seed, SeedStream::code, n));
  for (std::uint64_t i = size - 1; i > 0; --i) std::swap(forward[i], forward[rng.below(i + 1)]);
  return from_table(CodeKind::random, n, std::move(forward));
}

BinaryCode BinaryCode::from_table(CodeKind label, unsigned n, std::vector<std::uint64_t> table)
{
  check_bits(n, 32);
  const std::uint64_t size = std::uint64_t{1} << n;
  if (table.size() != size) throw std::invalid_argument("code table must have 2^n entries");
  std::vector<std::uint64_t> inverse(size, size);
  for (std::uint64_t i = 0; i < size; ++i) {
    const auto b = table[i];
    if (b >= size) throw std::invalid_argument("code table entry " + std::to_string(i) + " has more than n bits");
    if (inverse[b] != size) {
      throw std::invalid_argument("code table is not a bijection: entries " + std::to_string(inverse[b]) + " and " +
                                  std::to_string(i) + " coincide");
    }
    inverse[b] = i;
  }
  auto tables = std::make_shared<Tables>(Tables{std::move(table), std::move(inverse)});
  return {label, n, Mode::table, std::move(tables)};
}

BinaryCode BinaryCode::make(CodeKind kind, unsigned n, std::uint64_t seed)
{
  switch (kind) {
    case CodeKind::standard: return standard(n);
    case CodeKind::random: return random(n, seed);
    case CodeKind::reflected_gray: return reflected_gray(n);
    case CodeKind::monotone_gray: return monotone_gray(n);
  }
  throw std::invalid_argument("unknown code kind");
}

std::uint64_t BinaryCode::decode_value(std::uint64_t bits) const
{
  switch (mode_) {
    case Mode::identity: return bits;
    case Mode::reflected: return prefix_xor_decode(bits);
    case Mode::table: break;
  }
  return tables_->inverse[bits];
}

Bitstring BinaryCode::encode(std::uint64_t index) const
{
  check_index(index, n_);
  return {encode_value(index), n_};
}

std::uint64_t BinaryCode::decode(const Bitstring& b) const
{
  if (b.width != n_) throw std::invalid_argument("decode: bitstring width does not match code");
  return decode_value(b.value);
}

std::vector<std::uint64_t> BinaryCode::table() const
{
  if (mode_ == Mode::table) return tables_->forward;
  std::vector<std::uint64_t> out(size());
  for (std::uint64_t i = 0; i < out.size(); ++i) out[i] = encode_value(i);
  return out;
}

Rational Rational::make(std::uint64_t num, std::uint64_t den)
{
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  const auto g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

std::string Rational::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

CodeStats code_stats(const BinaryCode& code, unsigned max_bits)
{
  const unsigned n = code.bits();
  if (n > max_bits) {
    throw std::invalid_argument("code_stats: n = " + std::to_string(n) + " exceeds exhaustive-scan cap " +
                                std::to_string(max_bits));
  }
  const auto table         = code.table();
  const std::uint64_t size = table.size();

  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i + 1 < size; ++i) total += std::popcount(table[i] ^ table[i + 1]);

  CodeStats stats;
  stats.avg_neighbor_hamming = Rational::make(total, size - 1);

  const std::uint64_t max_k = std::min<std::uint64_t>(n, size - 1);
  for (std::uint64_t k = 1; k <= max_k; ++k) {
    bool kept = true;
    for (std::uint64_t i = 0; i + k < size && kept; ++i)
      kept = static_cast<std::uint64_t>(std::popcount(table[i] ^ table[i + k])) == k;
    if (!kept) break;
    stats.run_length = static_cast<unsigned>(k);
  }
  stats.is_gray     = stats.run_length >= 1;
  stats.is_monotone = !first_monotone_violation(code).has_value();
  return stats;
}

Rational standard_average_hamming_closed_form(unsigned n)
{
  check_bits(n, 62);
  const std::uint64_t p = std::uint64_t{1} << n;
  return Rational::make(2 * p - n - 2, p - 1);
}

double random_average_hamming_expected(unsigned n)
{
  const double p = std::ldexp(1.0, static_cast<int>(n));
  return p / (p - 1.0) * n / 2.0;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> first_gray_violation(const BinaryCode& code)
{
  for (std::uint64_t i = 0; i + 1 < code.size(); ++i)
    if (std::popcount(code.encode_value(i) ^ code.encode_value(i + 1)) != 1) return std::pair{i, i + 1};
  return std::nullopt;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> first_monotone_violation(const BinaryCode& code)
{
  // Sweep from the end, tracking where the minimum weight over k >= j occurs.
  const std::uint64_t size = code.size();
  std::uint64_t argmin     = size - 1;
  int min_weight           = std::popcount(code.encode_value(size - 1));
  std::optional<std::pair<std::uint64_t, std::uint64_t>> found;
  for (std::uint64_t j = size; j-- > 0;) {
    const int w = std::popcount(code.encode_value(j));
    if (w < min_weight) {
      min_weight = w;
      argmin     = j;
    }
    if (min_weight < w - 1) found = std::pair{j, argmin};
  }
  return found;
}

std::string render_code_table(unsigned n)
{
  if (n < 1 || n > 8) throw std::invalid_argument("codes table: n must be in [1, 8]");
  const std::uint64_t size = std::uint64_t{1} << n;
  const std::size_t cell   = std::max<std::size_t>(n, std::to_string(size - 1).size());
  const auto sc            = BinaryCode::standard(n);
  const auto rgc           = BinaryCode::reflected_gray(n);
  const auto mgc           = BinaryCode::monotone_gray(n);

  std::ostringstream out;
  auto pad = [&](std::string s, std::size_t w) {
    s.insert(0, w > s.size() ? w - s.size() : 0, ' ');
    return s;
  };
  auto row = [&](const std::string& label, auto&& cell_text) {
    std::string line = label;
    line.append(9 - label.size(), ' ');
    for (std::uint64_t i = 0; i < size; ++i) line += (i ? " " : "") + pad(cell_text(i), cell);
    out << line << '\n';
  };
  row("i", [](std::uint64_t i) { return std::to_string(i); });
  row("f_SC", [&](std::uint64_t i) { return sc.encode(i).to_string(); });
  row("f_RGC", [&](std::uint64_t i) { return rgc.encode(i).to_string(); });
  row("f_MGC", [&](std::uint64_t i) { return mgc.encode(i).to_string(); });
  return out.str();
}

}  // namespace qcbm
