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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qcbm {

/// An n-bit string b_{n-1} ... b_0. Bit i is the coefficient of 2^i, which is
/// also the bit carried by qubit i in the simulator.
struct Bitstring {
  std::uint64_t value = 0;
  unsigned width      = 0;

  bool bit(unsigned i) const { return (value >> i) & 1U; }

  /// Most-significant bit first, e.g. "011" for value 3 at width 3.
  std::string to_string() const;

  static Bitstring parse(std::string_view text);

  friend bool operator==(const Bitstring&, const Bitstring&) = default;
};

unsigned hamming(const Bitstring& a, const Bitstring& b);
unsigned hamming_weight(const Bitstring& b);

Bitstring standard_encode(std::uint64_t index, unsigned n);
std::uint64_t standard_decode(const Bitstring& b);

Bitstring rgc_encode(std::uint64_t index, unsigned n);
std::uint64_t rgc_decode(const Bitstring& b);

Bitstring mgc_encode(std::uint64_t index, unsigned n);
std::uint64_t mgc_decode(const Bitstring& b);

/// The monotone Gray sequence for n bits as integer values, built with the
/// Savage-Winkler recursion. Cached per n; the inverse table is built on the
/// same first use.
const std::vector<std::uint64_t>& monotone_gray_sequence(unsigned n);

enum class CodeKind { standard, random, reflected_gray, monotone_gray };

/// Short names used in files and on the command line: sc, rc, rgc, mgc.
std::string_view code_name(CodeKind kind);
CodeKind parse_code_kind(std::string_view name);

inline constexpr unsigned kMaxCodeBits       = 48;
inline constexpr unsigned kDefaultRandomCap  = 24;
inline constexpr unsigned kDefaultStatsCap   = 20;

/// A bijection between indices [0, 2^n) and n-bit strings.
///
/// Standard and reflected-Gray codes are evaluated arithmetically. Random and
/// monotone-Gray codes (and codes built from explicit tables) carry a forward
/// and an inverse table. Instances are immutable and cheap to copy.
class BinaryCode {
 public:
  static BinaryCode standard(unsigned n);
  static BinaryCode reflected_gray(unsigned n);
  static BinaryCode monotone_gray(unsigned n);

  /// Fisher-Yates shuffle of all 2^n bitstrings driven by Rng seeded from
  /// derive_seed(seed, SeedStream::code).
  static BinaryCode random(unsigned n, std::uint64_t seed, unsigned max_bits = kDefaultRandomCap);

  /// Arbitrary bijection given as table[index] = bitstring value. The table is
  /// validated. `label` is reported as the code's kind.
  static BinaryCode from_table(CodeKind label, unsigned n, std::vector<std::uint64_t> table);

  static BinaryCode make(CodeKind kind, unsigned n, std::uint64_t seed = 0);

  unsigned bits() const { return n_; }
  CodeKind kind() const { return kind_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }

  std::uint64_t encode_value(std::uint64_t index) const
  {
    switch (mode_) {
      case Mode::identity: return index;
      case Mode::reflected: return index ^ (index >> 1);
      case Mode::table: break;
    }
    return tables_->forward[index];
  }

  std::uint64_t decode_value(std::uint64_t bits) const;

  /// Range-checked variants.
  Bitstring encode(std::uint64_t index) const;
  std::uint64_t decode(const Bitstring& b) const;

  /// Explicit list of encode(0), ..., encode(2^n - 1).
  std::vector<std::uint64_t> table() const;

 private:
  enum class Mode { identity, reflected, table };
  struct Tables {
    std::vector<std::uint64_t> forward;
    std::vector<std::uint64_t> inverse;
  };

  BinaryCode(CodeKind kind, unsigned n, Mode mode, std::shared_ptr<const Tables> tables)
      : kind_(kind), n_(n), mode_(mode), tables_(std::move(tables))
  {
  }

  CodeKind kind_;
  unsigned n_;
  Mode mode_;
  std::shared_ptr<const Tables> tables_;
};

/// Exact non-negative fraction, always stored reduced.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(std::uint64_t num, std::uint64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

struct CodeStats {
  Rational avg_neighbor_hamming;
  unsigned run_length = 0;  // 0 when the code is not Gray
  bool is_gray        = false;
  bool is_monotone    = false;
};

CodeStats code_stats(const BinaryCode& code, unsigned max_bits = kDefaultStatsCap);

/// Closed form of the standard code's average neighbour distance,
/// 2^n/(2^n-1) * (2 - (n+2)/2^n) = (2^(n+1) - n - 2) / (2^n - 1).
Rational standard_average_hamming_closed_form(unsigned n);

/// Expected neighbour distance of a uniformly random bijection,
/// 2^n/(2^n-1) * n/2.
double random_average_hamming_expected(unsigned n);

/// First index pair (i, i+1) at Hamming distance != 1.
std::optional<std::pair<std::uint64_t, std::uint64_t>> first_gray_violation(const BinaryCode& code);

/// First pair j <= k with weight(f(k)) < weight(f(j)) - 1.
std::optional<std::pair<std::uint64_t, std::uint64_t>> first_monotone_violation(const BinaryCode& code);

/// Table with one header row of indices and one row per code (SC, RGC, MGC),
/// bitstrings printed most-significant bit first.
std::string render_code_table(unsigned n);

}  // namespace qcbm
