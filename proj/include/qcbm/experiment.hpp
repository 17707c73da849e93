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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcbm/trainer.hpp"

namespace qcbm {

struct DatasetAxis {
  DistributionKind kind = DistributionKind::centered_gaussian;
  double width          = 0.03;
  std::size_t count     = 256;
  std::vector<std::uint64_t> seeds;
};

/// Cartesian product of codes x qubits x layers x (dataset, seed); one
/// training run per tuple. JSON form mirrors the fields:
///
///   {"name": "fig3-mini", "codes": ["rc", "sc", "rgc", "mgc"],
///    "qubits": [8], "layers": [0, 1, 2],
///    "datasets": [{"kind": "centered_gaussian", "width": 0.03,
///                  "count": 256, "seeds": [1, 2, 3]}],
///    "epochs": 100, "shots": 256,
///    "training": {"learning_rate": 0.05, ...},   // optional, as in a config
///    "kernel": {"bandwidths": [...]},             // optional
///    "output_dir": "results/fig3-mini"}           // optional
struct SweepSpec {
  std::string name = "sweep";
  std::vector<CodeKind> codes;
  std::vector<unsigned> qubits;
  std::vector<unsigned> layers;
  std::vector<DatasetAxis> datasets;
  std::size_t epochs  = 100;
  std::size_t shots   = 256;
  AdamConfig adam;
  KernelConfig kernel;
  Estimator estimator = Estimator::biased;
  std::filesystem::path output_dir;

  void validate() const;
  std::size_t run_count() const;
};

SweepSpec sweep_from_json(const nlohmann::json& json);
nlohmann::ordered_json sweep_to_json(const SweepSpec& spec);
SweepSpec load_sweep(const std::filesystem::path& path);

/// fig3, fig4, fig5 (full scale) and fig3-mini, fig4-mini, fig5-mini.
SweepSpec preset(std::string_view name);
std::vector<std::string> preset_names();

/// Runs in a fixed order: datasets, seeds, qubits, layers, codes.
std::vector<TrainingConfig> expand(const SweepSpec& spec);

/// One line of the master results table.
struct ReportRow {
  CodeKind code         = CodeKind::standard;
  unsigned qubits       = 0;
  unsigned layers       = 0;
  DistributionKind kind = DistributionKind::centered_gaussian;
  double width          = 0.0;
  std::uint64_t seed    = 0;
  double q_score        = 0.0;
  double final_loss     = 0.0;
  double reference_loss = 0.0;
  std::optional<std::size_t> epochs_to_reference;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

ReportRow make_row(const TrainingRecord& record);

/// Directory name encoding (code, n, L, kind, width, seed), e.g.
/// rgc_n8_L0_centered_gaussian_nu0.03_s1.
std::string run_name(const ReportRow& row);
std::string run_name(const TrainingConfig& config);

/// code,n,L,kind,nu,seed,q_score,final_loss,reference_loss,epochs_to_reference
/// (the last column is empty when the reference was never reached).
void write_results_csv(std::span<const ReportRow> rows, std::ostream& out);
std::vector<ReportRow> read_results_csv(std::istream& in);

inline constexpr std::string_view kResultsFile  = "results.csv";
inline constexpr std::string_view kFailuresFile = "failures.csv";
inline constexpr std::string_view kRunsDir      = "runs";

/// Worker count from QCBM_WORKERS, else the hardware concurrency.
unsigned default_workers();

/// Trains every config; results are in input order. With more than one
/// worker each worker restricts itself to a single OpenMP thread.
std::vector<TrainingRecord> train_all(std::span<const TrainingConfig> configs, unsigned workers);

struct SweepFailure {
  std::string run;
  std::string error;
};

struct SweepOutcome {
  std::vector<ReportRow> rows;
  std::vector<SweepFailure> failures;
  std::size_t executed = 0;
  std::size_t skipped  = 0;
};

/// Runs whose record.json already exists are loaded instead of retrained.
/// Writes results.csv (completed runs) and failures.csv under `out`.
SweepOutcome run_sweep(const SweepSpec& spec, const std::filesystem::path& out, unsigned workers,
                       std::ostream* log = nullptr);

struct Summary {
  double mean       = 0.0;
  double std_error  = 0.0;  // sample std / sqrt(count); NaN for a single value
  std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

/// Comparison cell: every code trained on the same (kind, width, n, L).
using CellKey = std::tuple<DistributionKind, double, unsigned, unsigned>;

struct CellResult {
  std::map<CodeKind, Summary> q_by_code;
  std::optional<CodeKind> best;
  bool partial = false;
};

std::map<CellKey, CellResult> compare_cells(std::span<const ReportRow> rows,
                                            std::span<const SweepFailure> failures = {});

struct ReportSummary {
  std::size_t cells         = 0;
  std::size_t rgc_wins      = 0;
  std::size_t partial_cells = 0;
  std::vector<std::filesystem::path> files;
};

/// Reads results.csv (or a single run directory) and writes under
/// `dir/report/`:
///   loss_curves.csv   kind,nu,n,code,L,epoch,mean,std_error,runs
///   q_by_qubits.csv   kind,nu,code,n,L,mean_q,std_error,runs
///   q_by_width.csv    kind,n,code,nu,L,mean_q,std_error,runs
///   wins.csv          kind,nu,n,L,best_code,rgc_mean_q,best_mean_q,rgc_best,status
///   summary.txt       win count of the reflected Gray code
/// Throws when the directory holds no results.
ReportSummary write_report(const std::filesystem::path& dir, std::ostream* log = nullptr);

}  // namespace qcbm
