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

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qcbm/trainer.hpp"

namespace qcbm {

/// Training configuration file (JSON). Every field is optional; defaults are
/// the centred-Gaussian setting with the reflected Gray code:
///
///   {
///     "code": "rgc",                              // sc | rc | rgc | mgc
///     "circuit":  {"qubits": 8, "layers": 0},
///     "dataset":  {"kind": "centered_gaussian",   // | gaussian_mixture | sawtooth_mixture
///                  "width": 0.03, "count": 256, "seed": 0},
///     "training": {"epochs": 100, "shots": 256, "learning_rate": 0.05,
///                  "beta1": 0.9, "beta2": 0.999, "epsilon": 1e-8,
///                  "estimator": "biased",         // | unbiased
///                  "gradient": "shots",           // | exact
///                  "exact_loss": false, "reference_count": 256},
///     "kernel":   {"bandwidths": [0.003, 0.01, 0.03, 0.1, 0.3]},
///     "seeds":    {"code": S, "init": S, "shots": S, "reference": S}
///   }
///
/// Omitted seeds default to dataset.seed. Unknown keys are rejected.
TrainingConfig config_from_json(const nlohmann::json& json);
nlohmann::ordered_json config_to_json(const TrainingConfig& config);
TrainingConfig load_config(const std::filesystem::path& path);

inline constexpr std::string_view kRecordFormat = "qcbm-training-record/1";

/// Everything except the "wallclock" object is a deterministic function of
/// the configuration.
nlohmann::ordered_json record_to_json(const TrainingRecord& record);
TrainingRecord record_from_json(const nlohmann::json& json);
TrainingRecord read_record(const std::filesystem::path& path);

/// epoch,mmd2[,mmd2_exact],wallclock_ms with 1-based epochs.
void write_loss_csv(const TrainingRecord& record, std::ostream& out);

/// bin,count over the final-epoch synthetic samples; bin is the
/// representative index, only non-empty bins are listed.
void write_histogram_csv(const TrainingRecord& record, std::ostream& out);

/// bin,representative,probability: exact model distribution over
/// representatives for the record's final parameters.
void write_probability_csv(const TrainingRecord& record, std::ostream& out);

struct RunFiles {
  static constexpr std::string_view record    = "record.json";
  static constexpr std::string_view losses    = "loss.csv";
  static constexpr std::string_view histogram = "histogram.csv";
  static constexpr std::string_view dataset   = "dataset.csv";
  static constexpr std::string_view probs     = "probabilities.csv";
};

/// Writes record.json last, so its presence marks a completed run.
void write_run_directory(const TrainingRecord& record, const Dataset& dataset, const std::filesystem::path& dir,
                         bool dump_probabilities = false);

}  // namespace qcbm
