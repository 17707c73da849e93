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

#include "qcbm/commands.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qcbm/experiment.hpp"
#include "qcbm/record_io.hpp"

namespace qcbm {

namespace fs = std::filesystem;

namespace {

std::string pair_text(std::uint64_t i, std::uint64_t j, const BinaryCode& code)
{
  std::ostringstream s;
  s << "indices (" << i << ", " << j << "): " << code.encode(i).to_string() << " -> " << code.encode(j).to_string();
  return s.str();
}

std::string label(const BinaryCode& code)
{
  return std::string(code_name(code.kind())) + " n=" + std::to_string(code.bits());
}

}  // namespace

std::vector<CheckFailure> check_gray_code(const BinaryCode& code, bool require_monotone)
{
  std::vector<CheckFailure> failures;
  const auto name  = label(code);
  const auto table = code.table();

  std::vector<bool> seen(table.size(), false);
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    if (table[i] >= table.size() || seen[table[i]]) {
      failures.push_back({name + ": bijection", "index " + std::to_string(i) + " repeats or overflows"});
      break;
    }
    seen[table[i]] = true;
  }
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    if (code.decode_value(table[i]) != i) {
      failures.push_back({name + ": decode(encode(i)) = i", "fails at index " + std::to_string(i)});
      break;
    }
  }
  if (auto v = first_gray_violation(code)) failures.push_back({name + ": Gray", pair_text(v->first, v->second, code)});
  if (require_monotone) {
    if (auto v = first_monotone_violation(code))
      failures.push_back({name + ": monotone", pair_text(v->first, v->second, code)});
  }
  return failures;
}

std::vector<CheckFailure> check_codes(unsigned n_max, std::ostream* log)
{
  if (n_max < 1 || n_max > kMaxCheckBits)
    throw std::invalid_argument("codes check: n-max must be in [1, " + std::to_string(kMaxCheckBits) + "]");
  std::vector<CheckFailure> failures;
  auto expect = [&](bool ok, std::string property, std::string detail) {
    if (!ok) failures.push_back({std::move(property), std::move(detail)});
  };

  for (unsigned n = 1; n <= n_max; ++n) {
    const auto sc  = BinaryCode::standard(n);
    const auto rgc = BinaryCode::reflected_gray(n);
    const auto mgc = BinaryCode::monotone_gray(n);
    const auto before = failures.size();

    const auto sc_stats = code_stats(sc);
    const auto closed   = standard_average_hamming_closed_form(n);
    expect(sc_stats.avg_neighbor_hamming == closed, "sc n=" + std::to_string(n) + ": average Hamming closed form",
           "got " + sc_stats.avg_neighbor_hamming.to_string() + ", expected " + closed.to_string());

    for (const auto* code : {&rgc, &mgc}) {
      auto f = check_gray_code(*code, code == &mgc);
      failures.insert(failures.end(), f.begin(), f.end());
      const auto stats = code_stats(*code);
      expect(stats.avg_neighbor_hamming == Rational::make(1, 1), label(*code) + ": average Hamming = 1",
             "got " + stats.avg_neighbor_hamming.to_string());
    }

    if (n >= 2) {
      const auto run = code_stats(rgc).run_length;
      expect(run == 2, label(rgc) + ": run length = 2", "got " + std::to_string(run));
    }
    for (std::uint64_t i = 0; i + 1 < rgc.size(); ++i) {
      const auto diff     = rgc.encode_value(i) ^ rgc.encode_value(i + 1);
      const auto expected = std::uint64_t{1} << std::countr_zero(i + 1);
      if (diff != expected) {
        failures.push_back({label(rgc) + ": f(i) xor f(i+1) = f_SC(2^j)", pair_text(i, i + 1, rgc)});
        break;
      }
    }
    for (std::uint64_t i = 0; i < sc.size(); ++i) {
      if (standard_decode(standard_encode(i, n)) != i) {
        failures.push_back({"sc n=" + std::to_string(n) + ": decode(encode(i)) = i", "fails at " + std::to_string(i)});
        break;
      }
    }

    if (log) {
      *log << "n=" << std::setw(2) << n << "  sc avg Hamming " << sc_stats.avg_neighbor_hamming.to_string()
           << " (closed form " << closed.to_string() << ")  "
           << (failures.size() == before ? "ok" : "FAILED") << '\n';
    }
  }
  return failures;
}

int cmd_codes_table(unsigned n, std::ostream& out, std::ostream& err)
{
  try {
    out << render_code_table(n);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_codes_check(unsigned n_max, std::ostream& out, std::ostream& err)
{
  try {
    const auto failures = check_codes(n_max, &out);
    for (const auto& f : failures) err << "FAIL " << f.property << ": " << f.detail << '\n';
    out << (failures.empty() ? "all code properties hold" : "code property violations: " + std::to_string(failures.size()))
        << " for n = 1.." << n_max << '\n';
    return failures.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err)
{
  TrainingConfig config;
  try {
    config = load_config(options.config);
    if (options.exact_loss) config.exact_loss = true;
    config.validate();
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    const auto dir     = options.out.value_or(fs::path("runs") / run_name(config));
    const auto& ds     = config.dataset;
    const auto dataset = sample_dataset(ds.kind, ds.count, ds.width, ds.seed);
    const auto record  = train(config, dataset);
    write_run_directory(record, dataset, dir, options.dump_probs);
    out << std::setprecision(6);
    out << "run:            " << run_name(config) << '\n';
    out << "final loss:     " << record.losses.back() << '\n';
    out << "reference loss: " << record.reference_loss << '\n';
    out << "Q score:        " << record.q_score << '\n';
    out << "epochs to 2x reference: ";
    if (auto e = record.epochs_to_reference())
      out << *e << '\n';
    else
      out << "none\n";
    out << "wrote " << dir.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err)
{
  SweepSpec spec;
  try {
    if (options.spec.has_value() == options.preset.has_value())
      throw ConfigError("sweep: give exactly one of --spec or --preset");
    spec = options.spec ? load_sweep(*options.spec) : preset(*options.preset);
    if (options.epochs) spec.epochs = *options.epochs;
    spec.validate();
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    const auto dir     = options.out.value_or(spec.output_dir);
    const auto workers = options.workers ? options.workers : default_workers();
    out << "sweep " << spec.name << ": " << spec.run_count() << " runs, " << workers << " worker(s), output "
        << dir.string() << '\n';
    const auto outcome = run_sweep(spec, dir, workers, &out);
    out << "executed " << outcome.executed << ", skipped " << outcome.skipped << ", failed "
        << outcome.failures.size() << "; " << outcome.rows.size() << " rows in " << (dir / kResultsFile).string()
        << '\n';
    for (const auto& f : outcome.failures) err << "FAILED " << f.run << ": " << f.error << '\n';
    return outcome.failures.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_report(const fs::path& dir, std::ostream& out, std::ostream& err)
{
  try {
    const auto summary = write_report(dir, &out);
    if (summary.partial_cells) err << "warning: " << summary.partial_cells << " cell(s) have missing or failed runs\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qcbm
