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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qcbm/mmd_loss.hpp"
#include "qcbm/quantum_sim.hpp"
#include "qcbm/rng.hpp"
#include "qcbm/trainer.hpp"

namespace {

std::vector<double> uniform_state(unsigned n)
{
  return std::vector<double>(std::size_t{1} << n, 1.0 / std::sqrt(double(std::size_t{1} << n)));
}

void BM_ry_serial(benchmark::State& state)
{
  const auto n = static_cast<unsigned>(state.range(0));
  auto amps    = uniform_state(n);
  for (auto _ : state) {
    for (unsigned q = 0; q < n; ++q) qcbm::reference::apply_ry(amps, q, 0.1);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n * amps.size());
}

void BM_ry_parallel(benchmark::State& state)
{
  const auto n = static_cast<unsigned>(state.range(0));
  auto amps    = uniform_state(n);
  for (auto _ : state) {
    for (unsigned q = 0; q < n; ++q) qcbm::apply_ry(amps, q, 0.1);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n * amps.size());
}

qcbm::CircuitParams bench_params(unsigned n) { return qcbm::init_params({n, 4}, 1); }

void BM_build_state_serial(benchmark::State& state)
{
  const auto p = bench_params(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qcbm::reference::build_state(p));
}

void BM_build_state_parallel(benchmark::State& state)
{
  const auto p = bench_params(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qcbm::build_state(p));
}

std::vector<double> points(std::size_t count, std::uint64_t seed)
{
  qcbm::Rng rng(seed);
  std::vector<double> v(count);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

void BM_kernel_sum_serial(benchmark::State& state)
{
  const auto a = points(static_cast<std::size_t>(state.range(0)), 1);
  const auto b = points(256, 2);
  const qcbm::KernelConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(qcbm::reference::kernel_sum(a, b, cfg));
}

void BM_kernel_sum_parallel(benchmark::State& state)
{
  const auto a = points(static_cast<std::size_t>(state.range(0)), 1);
  const auto b = points(256, 2);
  const qcbm::KernelConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(qcbm::kernel_sum(a, b, cfg));
}

// One full training epoch (gradient, Adam step, loss sample).
void BM_epoch(benchmark::State& state)
{
  qcbm::TrainingConfig c;
  c.circuit = {static_cast<unsigned>(state.range(0)), 2};
  c.epochs  = 1;
  c.seed_all(1);
  for (auto _ : state) benchmark::DoNotOptimize(qcbm::train(c));
}

}  // namespace

BENCHMARK(BM_ry_serial)->DenseRange(12, 20, 4);
BENCHMARK(BM_ry_parallel)->DenseRange(12, 20, 4);
BENCHMARK(BM_build_state_serial)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_build_state_parallel)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_sum_serial)->Arg(256)->Arg(4096);
BENCHMARK(BM_kernel_sum_parallel)->Arg(256)->Arg(4096);
BENCHMARK(BM_epoch)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
