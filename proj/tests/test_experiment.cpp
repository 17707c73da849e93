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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qcbm/commands.hpp"
#include "qcbm/experiment.hpp"
#include "qcbm/record_io.hpp"

using namespace qcbm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("qcbm_test_" + name))
  {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p)
{
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text)
{
  std::ofstream out(p);
  out << text;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p)
{
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TrainingConfig small_config(std::uint64_t seed = 2)
{
  TrainingConfig c;
  c.circuit = {4, 1};
  c.epochs  = 6;
  c.shots   = 64;
  c.dataset = {DistributionKind::gaussian_mixture, 0.1, 32, seed};
  c.seed_all(seed);
  return c;
}

SweepSpec small_sweep()
{
  SweepSpec s;
  s.name     = "tiny";
  s.codes    = {CodeKind::standard, CodeKind::reflected_gray};
  s.qubits   = {3};
  s.layers   = {0, 1};
  s.datasets = {{DistributionKind::centered_gaussian, 0.1, 16, {1, 2}}};
  s.epochs   = 4;
  s.shots    = 32;
  return s;
}

}  // namespace

TEST_CASE("config JSON")
{
  SUBCASE("defaults from a short file")
  {
    const auto c = config_from_json(nlohmann::json::parse(R"({"code": "sc", "circuit": {"layers": 2}})"));
    CHECK(c.code == CodeKind::standard);
    CHECK(c.circuit == CircuitShape{8, 2});
    CHECK(c.epochs == 100);
    CHECK(c.shots == 256);
    CHECK(c.dataset.count == 256);
    CHECK(c.dataset.width == 0.03);
    CHECK(c.kernel == KernelConfig{});
  }
  SUBCASE("round trip")
  {
    auto c             = small_config();
    c.estimator        = Estimator::unbiased;
    c.gradient_mode    = GradientMode::exact;
    c.seeds.reference  = 77;
    c.kernel.bandwidths = {0.05, 0.2};
    CHECK(config_from_json(nlohmann::json::parse(config_to_json(c).dump())) == c);
  }
  SUBCASE("errors carry field paths")
  {
    CHECK_THROWS_WITH_AS(config_from_json(nlohmann::json::parse(R"({"training": {"epochs": 0}})")),
                         "training.epochs: must be >= 1", ConfigError);
    CHECK_THROWS_WITH_AS(config_from_json(nlohmann::json::parse(R"({"circuit": {"qbits": 3}})")),
                         "circuit.qbits: unknown field", ConfigError);
    CHECK_THROWS_WITH_AS(config_from_json(nlohmann::json::parse(R"({"training": {"shots": 1.5}})")),
                         "training.shots: expected an integer", ConfigError);
    CHECK_THROWS_WITH_AS(config_from_json(nlohmann::json::parse(R"({"dataset": {"count": -4}})")),
                         "dataset.count: must be non-negative", ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"code": "xyz"})")), ConfigError);
  }
  SUBCASE("seeds default to the dataset seed")
  {
    const auto c = config_from_json(nlohmann::json::parse(R"({"dataset": {"seed": 9}, "seeds": {"init": 4}})"));
    CHECK(c.seeds.code == 9);
    CHECK(c.seeds.shots == 9);
    CHECK(c.seeds.reference == 9);
    CHECK(c.seeds.init == 4);
  }
}

TEST_CASE("training record round trip")
{
  auto c       = small_config();
  c.exact_loss = true;
  const auto r = train(c);
  const auto j = nlohmann::json::parse(record_to_json(r).dump());
  CHECK(record_from_json(j) == r);
  CHECK(j["format"] == kRecordFormat);
  CHECK(j["losses"].size() == c.epochs);
}

TEST_CASE("run directory files")
{
  TempDir tmp("rundir");
  const auto c  = small_config();
  const auto ds = sample_dataset(c.dataset.kind, c.dataset.count, c.dataset.width, c.dataset.seed);
  const auto r  = train(c, ds);
  write_run_directory(r, ds, tmp.path, true);

  CHECK(read_record(tmp.path / RunFiles::record) == r);
  const auto loss = read_csv(tmp.path / RunFiles::losses);
  CHECK(loss[0] == std::vector<std::string>{"epoch", "mmd2", "wallclock_ms"});
  CHECK(loss.size() == c.epochs + 1);
  CHECK(std::stod(loss[3][1]) == r.losses[2]);

  const auto hist = read_csv(tmp.path / RunFiles::histogram);
  CHECK(hist[0] == std::vector<std::string>{"bin", "count"});
  std::size_t total = 0;
  for (std::size_t i = 1; i < hist.size(); ++i) {
    CHECK(std::stoul(hist[i][0]) < 16);
    total += std::stoul(hist[i][1]);
  }
  CHECK(total == c.shots);

  const auto probs = read_csv(tmp.path / RunFiles::probs);
  CHECK(probs[0] == std::vector<std::string>{"bin", "representative", "probability"});
  CHECK(probs.size() == 17);
  CHECK(load_dataset(tmp.path / RunFiles::dataset).samples == ds.samples);
}

TEST_CASE("cmd_train")
{
  TempDir tmp("train");
  spit(tmp.path / "c.json", R"({
    // comments are allowed
    "code": "rgc",
    "circuit": {"qubits": 4, "layers": 1},
    "dataset": {"kind": "centered_gaussian", "width": 0.1, "count": 32, "seed": 5},
    "training": {"epochs": 5, "shots": 64}
  })");
  std::ostringstream out, err;
  REQUIRE(cmd_train({tmp.path / "c.json", tmp.path / "a", false, false}, out, err) == 0);
  REQUIRE(cmd_train({tmp.path / "c.json", tmp.path / "b", false, false}, out, err) == 0);

  // Identical apart from wall-clock fields.
  auto a = nlohmann::json::parse(slurp(tmp.path / "a" / RunFiles::record));
  auto b = nlohmann::json::parse(slurp(tmp.path / "b" / RunFiles::record));
  a.erase("wallclock");
  b.erase("wallclock");
  CHECK(a.dump(2) == b.dump(2));
  CHECK(slurp(tmp.path / "a" / RunFiles::histogram) == slurp(tmp.path / "b" / RunFiles::histogram));

  spit(tmp.path / "bad.json", R"({"training": {"epochs": 0}})");
  std::ostringstream err2;
  CHECK(cmd_train({tmp.path / "bad.json", tmp.path / "c", false, false}, out, err2) == 2);
  CHECK(err2.str().find("training.epochs") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp.path / "c"));
}

TEST_CASE("sweep specs and presets")
{
  CHECK(preset("fig3").run_count() == 280);
  CHECK(preset("fig3-mini").run_count() == 36);
  CHECK(preset("fig4").run_count() == 4 * 6 * 7 * 10);
  CHECK(preset("fig4-mini").run_count() == 120);
  CHECK(preset("fig5").run_count() == 4 * 6 * 7 * 10);
  CHECK(preset("fig5-mini").run_count() == 80);
  CHECK_THROWS(preset("fig6"));
  for (const auto& name : preset_names()) {
    const auto s = preset(name);
    CHECK_NOTHROW(s.validate());
    CHECK(expand(s).size() == s.run_count());
    CHECK(sweep_from_json(nlohmann::json::parse(sweep_to_json(s).dump())).run_count() == s.run_count());
  }

  // Shipped spec files agree with the built-in presets.
  for (const auto& name : preset_names()) {
    const auto file = fs::path(QCBM_SOURCE_DIR) / "configs" / (name + ".json");
    REQUIRE(fs::exists(file));
    const auto s = load_sweep(file);
    const auto p = preset(name);
    CHECK(expand(s) == expand(p));
    CHECK(s.output_dir == p.output_dir);
  }

  SUBCASE("every axis tuple yields one distinct run")
  {
    const auto runs = expand(preset("fig5-mini"));
    std::set<std::string> names;
    for (const auto& r : runs) names.insert(run_name(r));
    CHECK(names.size() == runs.size());
  }
  SUBCASE("validation")
  {
    auto s = small_sweep();
    s.codes.clear();
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = small_sweep();
    s.datasets[0].seeds.clear();
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = small_sweep();
    s.epochs = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    CHECK_THROWS_AS(sweep_from_json(nlohmann::json::parse(R"({"codes": ["sc"], "depth": [1]})")), ConfigError);
  }
}

TEST_CASE("run names")
{
  auto c = small_config(7);
  CHECK(run_name(c) == "rgc_n4_L1_gaussian_mixture_nu0.1_s7");
  c.dataset.width = 0.003;
  c.code          = CodeKind::monotone_gray;
  CHECK(run_name(c) == "mgc_n4_L1_gaussian_mixture_nu0.003_s7");
}

TEST_CASE("results CSV round trip")
{
  std::vector<ReportRow> rows{
      {CodeKind::random, 8, 2, DistributionKind::sawtooth_mixture, 0.003, 4, 0.125, 0.01, 0.02, 17},
      {CodeKind::monotone_gray, 12, 0, DistributionKind::centered_gaussian, 0.03, 1, 1.0 / 3, 0.2, 0.1, std::nullopt}};
  std::stringstream s;
  write_results_csv(rows, s);
  CHECK(s.str().substr(0, s.str().find('\n')) ==
        "code,n,L,kind,nu,seed,q_score,final_loss,reference_loss,epochs_to_reference");
  CHECK(read_results_csv(s) == rows);
}

TEST_CASE("sweep execution, resumption and report")
{
  TempDir tmp("sweep");
  const auto spec = small_sweep();
  const auto out  = tmp.path / "tiny";

  auto outcome = run_sweep(spec, out, 2);
  CHECK(outcome.rows.size() == spec.run_count());
  CHECK(outcome.executed == spec.run_count());
  CHECK(outcome.failures.empty());
  std::ifstream in(out / kResultsFile);
  CHECK(read_results_csv(in).size() == 8);

  // Matches a direct single-threaded training of each configuration.
  const auto configs = expand(spec);
  const auto direct  = train_all(configs, 1);
  for (std::size_t i = 0; i < configs.size(); ++i) CHECK(make_row(direct[i]) == outcome.rows[i]);

  // Interrupted sweep: drop two runs, only those execute.
  fs::remove_all(out / kRunsDir / run_name(configs[1]));
  fs::remove(out / kRunsDir / run_name(configs[6]) / RunFiles::record);
  outcome = run_sweep(spec, out, 1);
  CHECK(outcome.executed == 2);
  CHECK(outcome.skipped == 6);
  CHECK(outcome.rows.size() == 8);

  std::ostringstream log, err;
  CHECK(cmd_report(out, log, err) == 0);
  for (const char* f : {"loss_curves.csv", "q_by_qubits.csv", "q_by_width.csv", "wins.csv", "summary.txt"})
    CHECK(fs::exists(out / "report" / f));
  const auto wins = read_csv(out / "report" / "wins.csv");
  CHECK(wins.size() == 1 + 2);  // (n=3) x (L=0, 1)
  const auto curves = read_csv(out / "report" / "loss_curves.csv");
  CHECK(curves.size() == 1 + 2 * 2 * spec.epochs);
}

TEST_CASE("sweep records per-run failures and continues")
{
  TempDir tmp("failing");
  auto spec = small_sweep();
  const auto out = tmp.path / "s";
  // A regular file where a run directory should go makes that run fail.
  fs::create_directories(out / kRunsDir);
  spit(out / kRunsDir / run_name(expand(spec)[3]), "blocker");
  const auto outcome = run_sweep(spec, out, 1);
  CHECK(outcome.failures.size() == 1);
  CHECK(outcome.rows.size() + outcome.failures.size() == spec.run_count());
  const auto failures = read_csv(out / kFailuresFile);
  CHECK(failures.size() == 2);
  CHECK(failures[1][0] == run_name(expand(spec)[3]));

  std::ostringstream log, err;
  CHECK(cmd_report(out, log, err) == 0);
  CHECK(err.str().find("missing or failed") != std::string::npos);
  const auto wins = read_csv(out / "report" / "wins.csv");
  int partial     = 0;
  for (std::size_t i = 1; i < wins.size(); ++i) partial += wins[i].back() == "partial";
  CHECK(partial == 1);

  SweepOptions opts;
  opts.spec = tmp.path / "none.json";
  CHECK(cmd_sweep(opts, log, err) == 2);
}

TEST_CASE("report aggregation matches a hand recomputation")
{
  TempDir tmp("aggregate");
  // Three runs of one cell, plus one run of a second code.
  const std::vector<std::vector<double>> histories{{0.5, 0.25, 0.125}, {0.4, 0.2, 0.1}, {0.9, 0.3, 0.05}};
  std::vector<ReportRow> rows;
  for (std::uint64_t s = 0; s < 3; ++s) {
    TrainingRecord r;
    r.config         = small_config(s + 1);
    r.config.circuit = {5, 1};
    r.config.epochs  = 3;
    r.config.code    = CodeKind::reflected_gray;
    r.losses         = histories[s];
    r.q_score        = q_score(r.losses);
    r.reference_loss = 0.1;
    r.epoch_ms       = {1, 1, 1};
    const auto dir   = tmp.path / kRunsDir / run_name(r.config);
    fs::create_directories(dir);
    spit(dir / RunFiles::record, record_to_json(r).dump());
    rows.push_back(make_row(r));
    r.config.code = CodeKind::standard;
    r.losses      = {1.0, 1.0, 1.0};
    r.q_score     = 1.0;
    const auto dir2 = tmp.path / kRunsDir / run_name(r.config);
    fs::create_directories(dir2);
    spit(dir2 / RunFiles::record, record_to_json(r).dump());
    rows.push_back(make_row(r));
  }
  {
    std::ofstream f(tmp.path / kResultsFile);
    write_results_csv(rows, f);
  }
  const auto summary = write_report(tmp.path);
  CHECK(summary.cells == 1);
  CHECK(summary.rgc_wins == 1);

  // Spreadsheet-style: mean = sum / 3, se = sqrt(sum sq dev / 2) / sqrt(3).
  const auto curves = read_csv(tmp.path / "report" / "loss_curves.csv");
  for (std::size_t e = 0; e < 3; ++e) {
    const double a = histories[0][e], b = histories[1][e], c = histories[2][e];
    const double mean = (a + b + c) / 3;
    const double se   = std::sqrt(((a - mean) * (a - mean) + (b - mean) * (b - mean) + (c - mean) * (c - mean)) / 2) /
                      std::sqrt(3.0);
    bool found = false;
    for (const auto& row : curves)
      if (row[3] == "rgc" && row[5] == std::to_string(e + 1)) {
        found = true;
        CHECK(std::abs(std::stod(row[6]) - mean) < 1e-12);
        CHECK(std::abs(std::stod(row[7]) - se) < 1e-12);
        CHECK(row[8] == "3");
      }
    CHECK(found);
  }
  const auto q = read_csv(tmp.path / "report" / "q_by_qubits.csv");
  double qmean = 0.0;
  for (const auto& h : histories) qmean += std::cbrt(h[0] * h[1] * h[2]) / 3;
  bool found = false;
  for (const auto& row : q)
    if (row[2] == "rgc") {
      found = true;
      CHECK(std::abs(std::stod(row[5]) - qmean) < 1e-12);
    }
  CHECK(found);
}

TEST_CASE("report edge cases")
{
  TempDir tmp("report_edges");
  std::ostringstream out, err;
  CHECK(cmd_report(tmp.path, out, err) == 1);
  CHECK(err.str().find("no results") != std::string::npos);

  const auto c  = small_config();
  const auto ds = sample_dataset(c.dataset.kind, c.dataset.count, c.dataset.width, c.dataset.seed);
  write_run_directory(train(c, ds), ds, tmp.path / "single");
  CHECK(cmd_report(tmp.path / "single", out, err) == 0);
  const auto curves = read_csv(tmp.path / "single" / "report" / "loss_curves.csv");
  CHECK(curves.size() == 1 + c.epochs);
  for (std::size_t i = 1; i < curves.size(); ++i) CHECK(curves[i][8] == "1");
}

TEST_CASE("summaries")
{
  const std::vector<double> v{1.0, 2.0, 4.0};
  const auto s = summarize(v);
  CHECK(s.mean == doctest::Approx(7.0 / 3));
  CHECK(s.count == 3);
  CHECK(std::isnan(summarize(std::vector<double>{1.0}).std_error));
}

TEST_CASE("worker count from the environment")
{
  setenv("QCBM_WORKERS", "3", 1);
  CHECK(default_workers() == 3);
  setenv("QCBM_WORKERS", "zero", 1);
  CHECK(default_workers() >= 1);
  unsetenv("QCBM_WORKERS");
  CHECK(default_workers() >= 1);
}
