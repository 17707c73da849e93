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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcbm/codes.hpp"

namespace qcbm {

struct CheckFailure {
  std::string property;
  std::string detail;  // includes the violating index pair where there is one
};

/// Bijection, round trip, Gray and (optionally) monotonicity checks on one code.
std::vector<CheckFailure> check_gray_code(const BinaryCode& code, bool require_monotone);

/// Property suite for n = 1..n_max over SC, RGC and MGC.
std::vector<CheckFailure> check_codes(unsigned n_max, std::ostream* log = nullptr);

inline constexpr unsigned kMaxCheckBits = 16;

// Each command returns a process exit code and reports on out/err.
int cmd_codes_table(unsigned n, std::ostream& out, std::ostream& err);
int cmd_codes_check(unsigned n_max, std::ostream& out, std::ostream& err);

struct TrainOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;  // default: runs/<run name>
  bool exact_loss  = false;
  bool dump_probs  = false;
};
int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err);

struct SweepOptions {
  std::optional<std::filesystem::path> spec;
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> out;  // default: the spec's output_dir
  std::optional<std::size_t> epochs;         // override, for smoke runs
  unsigned workers = 0;                      // 0: QCBM_WORKERS or core count
};
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

int cmd_report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

}  // namespace qcbm
