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

#include "qcbm/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qcbm/record_io.hpp"

namespace qcbm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t count)
{
  std::vector<std::uint64_t> s(count);
  std::iota(s.begin(), s.end(), first);
  return s;
}

std::vector<unsigned> layer_range(unsigned first, unsigned last)
{
  std::vector<unsigned> l;
  for (unsigned i = first; i <= last; ++i) l.push_back(i);
  return l;
}

const std::vector<CodeKind> kAllCodes{CodeKind::random, CodeKind::standard, CodeKind::reflected_gray,
                                      CodeKind::monotone_gray};

// Shortest decimal form that reads back as the same double.
std::string format_width(double w)
{
  for (int digits = 6; digits <= 17; ++digits) {
    std::ostringstream s;
    s << std::setprecision(digits) << w;
    if (std::stod(s.str()) == w) return s.str();
  }
  return std::to_string(w);
}

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_out(const fs::path& p)
{
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << std::setprecision(17);
  return f;
}

}  // namespace

void SweepSpec::validate() const
{
  if (codes.empty()) throw ConfigError("codes: at least one code is required");
  if (qubits.empty()) throw ConfigError("qubits: at least one qubit count is required");
  if (layers.empty()) throw ConfigError("layers: at least one layer count is required");
  if (datasets.empty()) throw ConfigError("datasets: at least one dataset is required");
  for (std::size_t i = 0; i < datasets.size(); ++i)
    if (datasets[i].seeds.empty())
      throw ConfigError("datasets[" + std::to_string(i) + "].seeds: at least one seed is required");
  for (const auto& c : expand(*this)) c.validate();
}

std::size_t SweepSpec::run_count() const
{
  std::size_t seeds = 0;
  for (const auto& d : datasets) seeds += d.seeds.size();
  return codes.size() * qubits.size() * layers.size() * seeds;
}

SweepSpec sweep_from_json(const json& j)
{
  static const std::set<std::string> known{"name",   "codes", "qubits",   "layers", "datasets",
                                           "epochs", "shots", "training", "kernel", "output_dir"};
  if (!j.is_object()) throw ConfigError("<root>: expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError(it.key() + ": unknown field");

  auto get = [&](const json& obj, const char* key, auto& out, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
      out = it->get<std::remove_reference_t<decltype(out)>>();
    } catch (const json::exception&) {
      throw ConfigError(path + ": wrong type");
    }
  };

  SweepSpec spec;
  get(j, "name", spec.name, "name");
  std::vector<std::string> codes;
  get(j, "codes", codes, "codes");
  for (std::size_t i = 0; i < codes.size(); ++i) {
    try {
      spec.codes.push_back(parse_code_kind(codes[i]));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("codes[" + std::to_string(i) + "]: " + e.what());
    }
  }
  get(j, "qubits", spec.qubits, "qubits");
  get(j, "layers", spec.layers, "layers");
  get(j, "epochs", spec.epochs, "epochs");
  get(j, "shots", spec.shots, "shots");
  std::string out;
  get(j, "output_dir", out, "output_dir");
  spec.output_dir = out;

  if (auto it = j.find("datasets"); it != j.end()) {
    if (!it->is_array()) throw ConfigError("datasets: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& d    = (*it)[i];
      const auto path  = "datasets[" + std::to_string(i) + "]";
      DatasetAxis axis;
      std::string kind = std::string(distribution_name(axis.kind));
      get(d, "kind", kind, path + ".kind");
      try {
        axis.kind = parse_distribution_kind(kind);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ".kind: " + e.what());
      }
      get(d, "width", axis.width, path + ".width");
      get(d, "count", axis.count, path + ".count");
      get(d, "seeds", axis.seeds, path + ".seeds");
      spec.datasets.push_back(std::move(axis));
    }
  }

  // training / kernel blocks reuse the single-run parser.
  json single = json::object();
  if (auto it = j.find("training"); it != j.end()) single["training"] = *it;
  if (auto it = j.find("kernel"); it != j.end()) single["kernel"] = *it;
  const auto base = config_from_json(single);
  spec.adam       = base.adam;
  spec.kernel     = base.kernel;
  spec.estimator  = base.estimator;
  if (single.contains("training")) {
    for (const char* k : {"epochs", "shots", "gradient", "exact_loss", "reference_count"})
      if (single["training"].contains(k)) throw ConfigError(std::string("training.") + k + ": not allowed in a sweep");
  }
  spec.validate();
  return spec;
}

nlohmann::ordered_json sweep_to_json(const SweepSpec& spec)
{
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["codes"] = json::array();
  for (auto c : spec.codes) j["codes"].push_back(code_name(c));
  j["qubits"]   = spec.qubits;
  j["layers"]   = spec.layers;
  j["datasets"] = json::array();
  for (const auto& d : spec.datasets)
    j["datasets"].push_back(nlohmann::ordered_json{
        {"kind", distribution_name(d.kind)}, {"width", d.width}, {"count", d.count}, {"seeds", d.seeds}});
  j["epochs"]   = spec.epochs;
  j["shots"]    = spec.shots;
  j["training"] = {{"learning_rate", spec.adam.learning_rate},
                   {"beta1", spec.adam.beta1},
                   {"beta2", spec.adam.beta2},
                   {"epsilon", spec.adam.epsilon},
                   {"estimator", spec.estimator == Estimator::biased ? "biased" : "unbiased"}};
  j["kernel"]   = {{"bandwidths", spec.kernel.bandwidths}};
  j["output_dir"] = spec.output_dir.string();
  return j;
}

SweepSpec load_sweep(const fs::path& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open sweep spec");
  try {
    return sweep_from_json(json::parse(in, nullptr, true, true));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

SweepSpec preset(std::string_view name)
{
  SweepSpec s;
  s.name  = std::string(name);
  s.codes = kAllCodes;
  s.output_dir = fs::path("results") / s.name;
  if (name == "fig3" || name == "fig3-mini") {
    const bool mini = name == "fig3-mini";
    s.qubits        = {8};
    s.layers        = mini ? std::vector<unsigned>{0, 1, 2} : layer_range(0, 6);
    s.datasets      = {{DistributionKind::centered_gaussian, 0.03, 256, seed_range(1, mini ? 3 : 10)}};
  } else if (name == "fig4" || name == "fig4-mini") {
    const bool mini = name == "fig4-mini";
    s.qubits        = mini ? std::vector<unsigned>{8, 12} : std::vector<unsigned>{6, 8, 10, 12, 14, 16};
    s.layers        = mini ? std::vector<unsigned>{0, 2, 4} : layer_range(0, 6);
    s.datasets      = {{DistributionKind::gaussian_mixture, 0.03, 256, seed_range(1, mini ? 5 : 10)}};
  } else if (name == "fig5" || name == "fig5-mini") {
    const bool mini = name == "fig5-mini";
    s.qubits        = {12};
    s.layers        = mini ? std::vector<unsigned>{2, 4} : layer_range(0, 6);
    const auto widths =
        mini ? std::vector<double>{0.03, 0.1} : std::vector<double>{0.001, 0.003, 0.01, 0.03, 0.1, 0.3};
    for (double w : widths)
      s.datasets.push_back({DistributionKind::sawtooth_mixture, w, 256, seed_range(1, mini ? 5 : 10)});
  } else {
    throw ConfigError("preset: unknown preset '" + std::string(name) + "'");
  }
  return s;
}

std::vector<std::string> preset_names() { return {"fig3", "fig3-mini", "fig4", "fig4-mini", "fig5", "fig5-mini"}; }

std::vector<TrainingConfig> expand(const SweepSpec& spec)
{
  std::vector<TrainingConfig> out;
  out.reserve(spec.run_count());
  for (const auto& d : spec.datasets)
    for (auto seed : d.seeds)
      for (auto n : spec.qubits)
        for (auto L : spec.layers)
          for (auto code : spec.codes) {
            TrainingConfig c;
            c.code    = code;
            c.circuit = {n, L};
            c.dataset = {d.kind, d.width, d.count, seed};
            c.seed_all(seed);
            c.kernel    = spec.kernel;
            c.adam      = spec.adam;
            c.epochs    = spec.epochs;
            c.shots     = spec.shots;
            c.estimator = spec.estimator;
            c.reference_count = d.count;
            out.push_back(std::move(c));
          }
  return out;
}

ReportRow make_row(const TrainingRecord& r)
{
  const auto& c = r.config;
  return {c.code,
          c.circuit.qubits,
          c.circuit.layers,
          c.dataset.kind,
          c.dataset.width,
          c.dataset.seed,
          r.q_score,
          r.losses.empty() ? 0.0 : r.losses.back(),
          r.reference_loss,
          r.epochs_to_reference()};
}

std::string run_name(const ReportRow& row)
{
  std::ostringstream s;
  s << code_name(row.code) << "_n" << row.qubits << "_L" << row.layers << '_' << distribution_name(row.kind)
    << "_nu" << format_width(row.width) << "_s" << row.seed;
  return s.str();
}

std::string run_name(const TrainingConfig& c)
{
  ReportRow row;
  row.code   = c.code;
  row.qubits = c.circuit.qubits;
  row.layers = c.circuit.layers;
  row.kind   = c.dataset.kind;
  row.width  = c.dataset.width;
  row.seed   = c.dataset.seed;
  return run_name(row);
}

void write_results_csv(std::span<const ReportRow> rows, std::ostream& out)
{
  out << "code,n,L,kind,nu,seed,q_score,final_loss,reference_loss,epochs_to_reference\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << code_name(r.code) << ',' << r.qubits << ',' << r.layers << ',' << distribution_name(r.kind) << ','
        << format_width(r.width) << ',' << r.seed << ',' << r.q_score << ',' << r.final_loss << ',' << r.reference_loss << ',';
    if (r.epochs_to_reference) out << *r.epochs_to_reference;
    out << '\n';
  }
}

std::vector<ReportRow> read_results_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line)) return {};
  std::vector<ReportRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 10) throw std::runtime_error("results.csv line " + std::to_string(lineno) + ": expected 10 columns");
    ReportRow r;
    r.code           = parse_code_kind(f[0]);
    r.qubits         = static_cast<unsigned>(std::stoul(f[1]));
    r.layers         = static_cast<unsigned>(std::stoul(f[2]));
    r.kind           = parse_distribution_kind(f[3]);
    r.width          = std::stod(f[4]);
    r.seed           = std::stoull(f[5]);
    r.q_score        = std::stod(f[6]);
    r.final_loss     = std::stod(f[7]);
    r.reference_loss = std::stod(f[8]);
    if (!f[9].empty()) r.epochs_to_reference = std::stoul(f[9]);
    rows.push_back(r);
  }
  return rows;
}

unsigned default_workers()
{
  if (const char* env = std::getenv("QCBM_WORKERS")) {
    try {
      const auto v = std::stoul(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Calls job(i) for i in [0, count) on `workers` threads.
template <typename Job>
void parallel_jobs(std::size_t count, unsigned workers, Job job)
{
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      omp_set_num_threads(1);
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<TrainingRecord> train_all(std::span<const TrainingConfig> configs, unsigned workers)
{
  std::vector<TrainingRecord> out(configs.size());
  std::exception_ptr error;
  std::mutex mutex;
  parallel_jobs(configs.size(), workers, [&](std::size_t i) {
    try {
      out[i] = train(configs[i]);
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!error) error = std::current_exception();
    }
  });
  if (error) std::rethrow_exception(error);
  return out;
}

SweepOutcome run_sweep(const SweepSpec& spec, const fs::path& out, unsigned workers, std::ostream* log)
{
  spec.validate();
  const auto configs = expand(spec);
  fs::create_directories(out / kRunsDir);
  {
    std::ofstream f(out / "sweep.json");
    f << sweep_to_json(spec).dump(2) << '\n';
  }

  std::vector<std::optional<ReportRow>> rows(configs.size());
  std::vector<std::optional<std::string>> errors(configs.size());
  std::atomic<std::size_t> executed{0}, skipped{0}, done{0};
  std::mutex log_mutex;

  parallel_jobs(configs.size(), workers, [&](std::size_t i) {
    const auto name = run_name(configs[i]);
    const auto dir  = out / kRunsDir / name;
    const auto t0   = std::chrono::steady_clock::now();
    std::string status;
    try {
      if (fs::exists(dir / RunFiles::record)) {
        rows[i] = make_row(read_record(dir / RunFiles::record));
        ++skipped;
        status = "skipped (complete)";
      } else {
        const auto& ds     = configs[i].dataset;
        const auto dataset = sample_dataset(ds.kind, ds.count, ds.width, ds.seed);
        const auto record  = train(configs[i], dataset);
        write_run_directory(record, dataset, dir);
        rows[i] = make_row(record);
        ++executed;
        std::ostringstream s;
        s << "Q=" << record.q_score;
        status = s.str();
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
      status    = std::string("FAILED: ") + e.what();
    }
    if (log) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::lock_guard lock(log_mutex);
      *log << '[' << ++done << '/' << configs.size() << "] " << name << "  " << status << "  (" << std::fixed
           << std::setprecision(1) << secs << " s)" << std::defaultfloat << std::setprecision(6) << std::endl;
    }
  });

  SweepOutcome outcome;
  outcome.executed = executed;
  outcome.skipped  = skipped;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (rows[i]) outcome.rows.push_back(*rows[i]);
    if (errors[i]) outcome.failures.push_back({run_name(configs[i]), *errors[i]});
  }
  {
    auto f = open_out(out / kResultsFile);
    write_results_csv(outcome.rows, f);
  }
  {
    auto f = open_out(out / kFailuresFile);
    f << "run,error\n";
    for (const auto& e : outcome.failures) {
      std::string msg = e.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      f << e.run << ',' << msg << '\n';
    }
  }
  return outcome;
}

Summary summarize(std::span<const double> values)
{
  Summary s;
  s.count = values.size();
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), 0};
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) {
    s.std_error = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  const auto n = static_cast<double>(values.size());
  s.std_error  = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return s;
}

std::map<CellKey, CellResult> compare_cells(std::span<const ReportRow> rows, std::span<const SweepFailure> failures)
{
  std::set<CodeKind> all_codes;
  std::map<CellKey, std::map<CodeKind, std::vector<double>>> grouped;
  for (const auto& r : rows) {
    all_codes.insert(r.code);
    grouped[{r.kind, r.width, r.qubits, r.layers}][r.code].push_back(r.q_score);
  }
  std::set<std::string> failed_runs;
  for (const auto& f : failures) failed_runs.insert(f.run);

  std::map<CellKey, CellResult> cells;
  for (const auto& [key, by_code] : grouped) {
    CellResult cell;
    std::size_t expected = 0;
    for (const auto& [code, qs] : by_code) expected = std::max(expected, qs.size());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [code, qs] : by_code) {
      const auto s          = summarize(qs);
      cell.q_by_code[code]  = s;
      if (qs.size() != expected) cell.partial = true;
      if (s.mean < best) {
        best      = s.mean;
        cell.best = code;
      }
    }
    if (by_code.size() != all_codes.size()) cell.partial = true;
    // Any failed run belonging to this cell also marks it partial.
    for (const auto& f : failed_runs) {
      const auto& [kind, width, n, L] = key;
      std::ostringstream tag;
      tag << "_n" << n << "_L" << L << '_' << distribution_name(kind) << "_nu" << format_width(width) << "_s";
      if (f.find(tag.str()) != std::string::npos) cell.partial = true;
    }
    cells[key] = std::move(cell);
  }
  return cells;
}

ReportSummary write_report(const fs::path& dir, std::ostream* log)
{
  std::vector<ReportRow> rows;
  std::vector<SweepFailure> failures;
  std::map<std::string, std::vector<double>> histories;  // run name -> losses

  if (fs::exists(dir / kResultsFile)) {
    std::ifstream in(dir / kResultsFile);
    rows = read_results_csv(in);
    if (std::ifstream fin(dir / kFailuresFile); fin) {
      std::string line;
      std::getline(fin, line);
      while (std::getline(fin, line)) {
        const auto comma = line.find(',');
        if (comma != std::string::npos) failures.push_back({line.substr(0, comma), line.substr(comma + 1)});
      }
    }
    for (const auto& r : rows) {
      const auto p = dir / kRunsDir / run_name(r) / RunFiles::record;
      if (fs::exists(p))
        histories[run_name(r)] = read_record(p).losses;
      else if (log)
        *log << "warning: missing " << p.string() << ", loss curve skipped\n";
    }
  } else if (fs::exists(dir / RunFiles::record)) {
    const auto record = read_record(dir / RunFiles::record);
    rows.push_back(make_row(record));
    histories[run_name(rows.back())] = record.losses;
  }
  if (rows.empty()) throw std::runtime_error("no results in " + dir.string());

  const auto report_dir = dir / "report";
  fs::create_directories(report_dir);
  ReportSummary summary;

  // Per-epoch loss curves, one series per (kind, nu, n, code, L).
  {
    std::map<std::tuple<DistributionKind, double, unsigned, CodeKind, unsigned>, std::vector<const std::vector<double>*>> groups;
    for (const auto& r : rows) {
      auto it = histories.find(run_name(r));
      if (it != histories.end()) groups[{r.kind, r.width, r.qubits, r.code, r.layers}].push_back(&it->second);
    }
    const auto path = report_dir / "loss_curves.csv";
    auto f          = open_out(path);
    f << "kind,nu,n,code,L,epoch,mean,std_error,runs\n";
    for (const auto& [key, series] : groups) {
      const auto& [kind, width, n, code, L] = key;
      std::size_t epochs = std::numeric_limits<std::size_t>::max();
      for (auto* s : series) epochs = std::min(epochs, s->size());
      for (std::size_t e = 0; e < epochs; ++e) {
        std::vector<double> v;
        for (auto* s : series) v.push_back((*s)[e]);
        const auto st = summarize(v);
        f << distribution_name(kind) << ',' << format_width(width) << ',' << n << ',' << code_name(code) << ',' << L << ',' << e + 1
          << ',' << st.mean << ',' << st.std_error << ',' << st.count << '\n';
      }
    }
    summary.files.push_back(path);
  }

  // Mean Q per (kind, nu, code, n, L), written in two orders.
  std::map<std::tuple<DistributionKind, double, CodeKind, unsigned, unsigned>, std::vector<double>> qs;
  for (const auto& r : rows) qs[{r.kind, r.width, r.code, r.qubits, r.layers}].push_back(r.q_score);
  {
    const auto path = report_dir / "q_by_qubits.csv";
    auto f          = open_out(path);
    f << "kind,nu,code,n,L,mean_q,std_error,runs\n";
    for (const auto& [key, v] : qs) {
      const auto& [kind, width, code, n, L] = key;
      const auto st                         = summarize(v);
      f << distribution_name(kind) << ',' << format_width(width) << ',' << code_name(code) << ',' << n << ',' << L << ',' << st.mean
        << ',' << st.std_error << ',' << st.count << '\n';
    }
    summary.files.push_back(path);
  }
  {
    std::map<std::tuple<DistributionKind, unsigned, CodeKind, double, unsigned>, Summary> by_width;
    for (const auto& [key, v] : qs) {
      const auto& [kind, width, code, n, L] = key;
      by_width[{kind, n, code, width, L}]   = summarize(v);
    }
    const auto path = report_dir / "q_by_width.csv";
    auto f          = open_out(path);
    f << "kind,n,code,nu,L,mean_q,std_error,runs\n";
    for (const auto& [key, st] : by_width) {
      const auto& [kind, n, code, width, L] = key;
      f << distribution_name(kind) << ',' << n << ',' << code_name(code) << ',' << format_width(width) << ',' << L << ',' << st.mean
        << ',' << st.std_error << ',' << st.count << '\n';
    }
    summary.files.push_back(path);
  }

  // Which code has the lowest mean Q in each comparison cell.
  {
    const auto cells = compare_cells(rows, failures);
    const auto path  = report_dir / "wins.csv";
    auto f           = open_out(path);
    f << "kind,nu,n,L,best_code,rgc_mean_q,best_mean_q,rgc_best,status\n";
    for (const auto& [key, cell] : cells) {
      const auto& [kind, width, n, L] = key;
      const auto rgc                  = cell.q_by_code.find(CodeKind::reflected_gray);
      const bool rgc_best             = cell.best == CodeKind::reflected_gray;
      f << distribution_name(kind) << ',' << format_width(width) << ',' << n << ',' << L << ','
        << (cell.best ? code_name(*cell.best) : "") << ',';
      if (rgc != cell.q_by_code.end()) f << rgc->second.mean;
      f << ',' << (cell.best ? cell.q_by_code.at(*cell.best).mean : std::nan("")) << ',' << (rgc_best ? 1 : 0) << ','
        << (cell.partial ? "partial" : "complete") << '\n';
      ++summary.cells;
      if (rgc_best) ++summary.rgc_wins;
      if (cell.partial) ++summary.partial_cells;
    }
    summary.files.push_back(path);
  }
  {
    const auto path = report_dir / "summary.txt";
    auto f          = open_out(path);
    f << std::setprecision(4);
    f << "runs: " << rows.size() << "\n";
    f << "failed runs: " << failures.size() << "\n";
    f << "comparison cells: " << summary.cells << " (" << summary.partial_cells << " partial)\n";
    f << "rgc lowest mean Q: " << summary.rgc_wins << " of " << summary.cells << " cells";
    if (summary.cells) f << " (" << 100.0 * static_cast<double>(summary.rgc_wins) / static_cast<double>(summary.cells) << "%)";
    f << "\n";
    summary.files.push_back(path);
  }
  if (log) {
    *log << "rgc lowest mean Q in " << summary.rgc_wins << " of " << summary.cells << " cells";
    if (summary.partial_cells) *log << " (" << summary.partial_cells << " partial)";
    *log << '\n';
    for (const auto& p : summary.files) *log << "wrote " << p.string() << '\n';
  }
  return summary;
}

}  // namespace qcbm
