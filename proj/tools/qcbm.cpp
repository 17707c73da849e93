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

#include <iostream>

#include <CLI11.hpp>

#include "qcbm/commands.hpp"
#include "qcbm/experiment.hpp"

int main(int argc, char** argv)
{
  CLI::App app{"Quantum circuit Born machines under different binary codes"};
  app.require_subcommand(1);

  auto* codes = app.add_subcommand("codes", "Inspect and verify the binary codes");
  codes->require_subcommand(1);
  unsigned table_n = 3;
  auto* table      = codes->add_subcommand("table", "Print the SC, RGC and MGC tables");
  table->add_option("--n", table_n, "Number of bits (1-8)")->required();
  unsigned n_max = qcbm::kMaxCheckBits;
  auto* check    = codes->add_subcommand("check", "Run the code property suite");
  check->add_option("--n-max", n_max, "Largest bit count to check (1-16)")->capture_default_str();

  qcbm::TrainOptions train_opts;
  std::string train_out;
  auto* train = app.add_subcommand("train", "Train one model from a config file");
  train->add_option("--config", train_opts.config, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  train->add_option("--out", train_out, "Run directory (default runs/<run name>)");
  train->add_flag("--exact-loss", train_opts.exact_loss, "Also record the exact loss each epoch");
  train->add_flag("--dump-probs", train_opts.dump_probs, "Write the final model distribution");

  qcbm::SweepOptions sweep_opts;
  std::string sweep_spec, sweep_preset, sweep_out;
  std::size_t sweep_epochs = 0;
  auto* sweep              = app.add_subcommand("sweep", "Run a sweep of training runs");
  auto* spec_opt = sweep->add_option("--spec", sweep_spec, "Sweep spec file (JSON)")->check(CLI::ExistingFile);
  auto* preset_opt =
      sweep->add_option("--preset", sweep_preset, "Built-in sweep")->check(CLI::IsMember(qcbm::preset_names()));
  spec_opt->excludes(preset_opt);
  sweep->add_option("--out", sweep_out, "Results directory (default from the spec)");
  sweep->add_option("--epochs", sweep_epochs, "Override the epoch count");
  sweep->add_option("--workers", sweep_opts.workers, "Parallel runs (default $QCBM_WORKERS or core count)");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Aggregate a results directory into figure data");
  report->add_option("--dir", report_dir, "Sweep or run directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (table->parsed()) return qcbm::cmd_codes_table(table_n, std::cout, std::cerr);
  if (check->parsed()) return qcbm::cmd_codes_check(n_max, std::cout, std::cerr);
  if (train->parsed()) {
    if (!train_out.empty()) train_opts.out = train_out;
    return qcbm::cmd_train(train_opts, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    if (!sweep_spec.empty()) sweep_opts.spec = sweep_spec;
    if (!sweep_preset.empty()) sweep_opts.preset = sweep_preset;
    if (!sweep_out.empty()) sweep_opts.out = sweep_out;
    if (sweep_epochs) sweep_opts.epochs = sweep_epochs;
    return qcbm::cmd_sweep(sweep_opts, std::cout, std::cerr);
  }
  return qcbm::cmd_report(report_dir, std::cout, std::cerr);
}
