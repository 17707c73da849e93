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

#include "qcbm/record_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <type_traits>

namespace qcbm {

namespace {

using nlohmann::json;

// Reads typed fields out of one JSON object, tracking the path for messages
// and rejecting keys that were never asked for.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
  {
    if (!obj_.is_object()) throw ConfigError(label() + ": expected an object");
  }

  template <typename T>
  void read(const char* key, T& out)
  {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!it->is_number_integer()) throw ConfigError(join(key) + ": expected an integer");
      if (std::is_unsigned_v<T> && !it->is_number_unsigned()) throw ConfigError(join(key) + ": must be non-negative");
    }
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(join(key) + ": wrong type");
    }
  }

  const json* child(const char* key)
  {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const
  {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(join(it.key().c_str()) + ": unknown field");
  }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Parse>
auto parse_enum(const std::string& path, const std::string& text, Parse parse)
{
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string_view estimator_name(Estimator e) { return e == Estimator::biased ? "biased" : "unbiased"; }

Estimator parse_estimator(std::string_view s)
{
  if (s == "biased") return Estimator::biased;
  if (s == "unbiased") return Estimator::unbiased;
  throw std::invalid_argument("expected biased or unbiased");
}

std::string_view gradient_name(GradientMode m) { return m == GradientMode::shots ? "shots" : "exact"; }

GradientMode parse_gradient(std::string_view s)
{
  if (s == "shots") return GradientMode::shots;
  if (s == "exact") return GradientMode::exact;
  throw std::invalid_argument("expected shots or exact");
}

}  // namespace

TrainingConfig config_from_json(const json& root)
{
  TrainingConfig cfg;
  Fields top(root, "");

  std::string code = std::string(code_name(cfg.code));
  top.read("code", code);
  cfg.code = parse_enum("code", code, parse_code_kind);

  if (const json* c = top.child("circuit")) {
    Fields f(*c, "circuit");
    f.read("qubits", cfg.circuit.qubits);
    f.read("layers", cfg.circuit.layers);
    f.finish();
  }

  if (const json* d = top.child("dataset")) {
    Fields f(*d, "dataset");
    std::string kind = std::string(distribution_name(cfg.dataset.kind));
    f.read("kind", kind);
    cfg.dataset.kind = parse_enum("dataset.kind", kind, parse_distribution_kind);
    f.read("width", cfg.dataset.width);
    f.read("count", cfg.dataset.count);
    f.read("seed", cfg.dataset.seed);
    f.finish();
  }

  if (const json* t = top.child("training")) {
    Fields f(*t, "training");
    f.read("epochs", cfg.epochs);
    f.read("shots", cfg.shots);
    f.read("learning_rate", cfg.adam.learning_rate);
    f.read("beta1", cfg.adam.beta1);
    f.read("beta2", cfg.adam.beta2);
    f.read("epsilon", cfg.adam.epsilon);
    std::string estimator = std::string(estimator_name(cfg.estimator));
    f.read("estimator", estimator);
    cfg.estimator = parse_enum("training.estimator", estimator, parse_estimator);
    std::string gradient = std::string(gradient_name(cfg.gradient_mode));
    f.read("gradient", gradient);
    cfg.gradient_mode = parse_enum("training.gradient", gradient, parse_gradient);
    f.read("exact_loss", cfg.exact_loss);
    f.read("reference_count", cfg.reference_count);
    f.finish();
  }

  if (const json* k = top.child("kernel")) {
    Fields f(*k, "kernel");
    f.read("bandwidths", cfg.kernel.bandwidths);
    f.finish();
  }

  cfg.seeds = {cfg.dataset.seed, cfg.dataset.seed, cfg.dataset.seed, cfg.dataset.seed};
  if (const json* s = top.child("seeds")) {
    Fields f(*s, "seeds");
    f.read("code", cfg.seeds.code);
    f.read("init", cfg.seeds.init);
    f.read("shots", cfg.seeds.shots);
    f.read("reference", cfg.seeds.reference);
    f.finish();
  }
  top.finish();
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json config_to_json(const TrainingConfig& cfg)
{
  nlohmann::ordered_json j;
  j["code"]     = code_name(cfg.code);
  j["circuit"]  = {{"qubits", cfg.circuit.qubits}, {"layers", cfg.circuit.layers}};
  j["dataset"]  = {{"kind", distribution_name(cfg.dataset.kind)},
                   {"width", cfg.dataset.width},
                   {"count", cfg.dataset.count},
                   {"seed", cfg.dataset.seed}};
  j["training"] = {{"epochs", cfg.epochs},
                   {"shots", cfg.shots},
                   {"learning_rate", cfg.adam.learning_rate},
                   {"beta1", cfg.adam.beta1},
                   {"beta2", cfg.adam.beta2},
                   {"epsilon", cfg.adam.epsilon},
                   {"estimator", estimator_name(cfg.estimator)},
                   {"gradient", gradient_name(cfg.gradient_mode)},
                   {"exact_loss", cfg.exact_loss},
                   {"reference_count", cfg.reference_count}};
  j["kernel"]   = {{"bandwidths", cfg.kernel.bandwidths}};
  j["seeds"]    = {{"code", cfg.seeds.code},
                   {"init", cfg.seeds.init},
                   {"shots", cfg.seeds.shots},
                   {"reference", cfg.seeds.reference}};
  return j;
}

TrainingConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json root;
  try {
    root = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(root);
}

nlohmann::ordered_json record_to_json(const TrainingRecord& r)
{
  nlohmann::ordered_json j;
  j["format"]         = kRecordFormat;
  j["config"]         = config_to_json(r.config);
  j["reference_loss"] = r.reference_loss;
  j["q_score"]        = r.q_score;
  j["clamped"]        = r.clamped;
  j["final_loss"]     = r.losses.empty() ? 0.0 : r.losses.back();
  if (auto e = r.epochs_to_reference())
    j["epochs_to_reference"] = *e;
  else
    j["epochs_to_reference"] = nullptr;
  j["losses"]       = r.losses;
  j["exact_losses"] = r.exact_losses;
  j["final_theta"]  = r.final_theta;
  j["synthetic"]    = r.synthetic;
  double total      = 0.0;
  for (double ms : r.epoch_ms) total += ms;
  j["wallclock"] = {{"total_ms", total}, {"epoch_ms", r.epoch_ms}};
  return j;
}

TrainingRecord record_from_json(const json& j)
{
  if (j.value("format", std::string{}) != kRecordFormat) throw std::runtime_error("not a training record");
  TrainingRecord r;
  r.config         = config_from_json(j.at("config"));
  r.reference_loss = j.at("reference_loss").get<double>();
  r.q_score        = j.at("q_score").get<double>();
  r.clamped        = j.at("clamped").get<std::size_t>();
  r.losses         = j.at("losses").get<std::vector<double>>();
  r.exact_losses   = j.at("exact_losses").get<std::vector<double>>();
  r.final_theta    = j.at("final_theta").get<std::vector<double>>();
  r.synthetic      = j.at("synthetic").get<std::vector<std::uint64_t>>();
  r.epoch_ms       = j.at("wallclock").at("epoch_ms").get<std::vector<double>>();
  return r;
}

TrainingRecord read_record(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return record_from_json(json::parse(in));
}

void write_loss_csv(const TrainingRecord& r, std::ostream& out)
{
  const bool exact = !r.exact_losses.empty();
  out << "epoch,mmd2" << (exact ? ",mmd2_exact" : "") << ",wallclock_ms\n";
  out << std::setprecision(17);
  for (std::size_t e = 0; e < r.losses.size(); ++e) {
    out << e + 1 << ',' << r.losses[e];
    if (exact) out << ',' << r.exact_losses[e];
    out << ',' << (e < r.epoch_ms.size() ? r.epoch_ms[e] : 0.0) << '\n';
  }
}

void write_histogram_csv(const TrainingRecord& r, std::ostream& out)
{
  std::map<std::uint64_t, std::size_t> counts;
  for (auto j : r.synthetic) ++counts[j];
  out << "bin,count\n";
  for (auto [bin, count] : counts) out << bin << ',' << count << '\n';
}

void write_probability_csv(const TrainingRecord& r, std::ostream& out)
{
  const CircuitParams params(r.config.circuit, r.final_theta);
  const auto code  = BinaryCode::make(r.config.code, r.config.circuit.qubits, r.config.seeds.code);
  const auto space = make_space(r.config.circuit.qubits);
  const auto p     = pushforward(born_probabilities(build_state(params)), code);
  out << "bin,representative,probability\n" << std::setprecision(17);
  for (std::size_t j = 0; j < p.size(); ++j) out << j << ',' << space.representative(j) << ',' << p[j] << '\n';
}

void write_run_directory(const TrainingRecord& record, const Dataset& dataset, const std::filesystem::path& dir,
                         bool dump_probabilities)
{
  std::filesystem::create_directories(dir);
  auto open = [&](std::string_view name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  save_dataset(dataset, dir / RunFiles::dataset);
  {
    auto f = open(RunFiles::losses);
    write_loss_csv(record, f);
  }
  {
    auto f = open(RunFiles::histogram);
    write_histogram_csv(record, f);
  }
  if (dump_probabilities) {
    auto f = open(RunFiles::probs);
    write_probability_csv(record, f);
  }
  // Write-then-rename so an interrupted run never leaves a partial record.
  const auto tmp = dir / (std::string(RunFiles::record) + ".tmp");
  {
    std::ofstream f(tmp);
    f << record_to_json(record).dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, dir / RunFiles::record);
}

}  // namespace qcbm
