/* Copyright 2026 The spinopt Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <benchmark/benchmark.h>

#include <random>

#include "spinopt/grape.hpp"

namespace {

using namespace spinopt;

const auto kIsing = CouplingSpec::nearest_neighbour(CouplingKind::ising);

PiecewiseControl random_control(double t_final, int k, int m) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  PiecewiseControl c = PiecewiseControl::uniform(t_final, k, m);
  RealMatrix v(k, m);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) v(i, j) = u(rng);
  c.set_values(v);
  return c;
}

void BM_HermExpm(benchmark::State& state) {
  const int n_qubits = static_cast<int>(state.range(0));
  const ControlSystem sys = build_global_field_model(std::vector<double>(n_qubits, 10.0), {}, kIsing);
  const std::vector<double> u{1.0, -2.0};
  const ComplexMatrix h = sys.hamiltonian(u);
  for (auto _ : state) benchmark::DoNotOptimize(herm_expm(h, 0.01));
}
BENCHMARK(BM_HermExpm)->Arg(2)->Arg(3);

void BM_Propagate(benchmark::State& state) {
  const int n_qubits = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const ControlSystem sys = build_global_field_model(std::vector<double>(n_qubits, 10.0), {}, kIsing);
  const PiecewiseControl c = random_control(1.0, k, 2);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(sys, c));
  state.SetItemsProcessed(state.iterations() * k);
}
BENCHMARK(BM_Propagate)->Args({2, 100})->Args({3, 500});

void BM_Gradient(benchmark::State& state) {
  const int n_qubits = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const ControlSystem sys = build_global_field_model(std::vector<double>(n_qubits, 10.0), {}, kIsing);
  const PiecewiseControl c = random_control(1.0, k, 2);
  const GateTarget target = n_qubits == 2 ? cnot() : toffoli_like();
  const PropagationCache cache = propagate(sys, c);
  for (auto _ : state) benchmark::DoNotOptimize(fidelity_gradient(cache, sys, target, c));
  state.SetItemsProcessed(state.iterations() * k);
}
BENCHMARK(BM_Gradient)->Args({2, 100})->Args({3, 500});

void BM_OptimizeElectrodeCnot(benchmark::State& state) {
  const ControlSystem sys = build_electrode_model(10.0, {}, 2,
                                                  CouplingSpec::nearest_neighbour(CouplingKind::heisenberg));
  OptimizerConfig cfg;
  cfg.mode = state.range(0) ? UpdateMode::local : UpdateMode::global;
  const PiecewiseControl c0 = initial_control(sys, 1.0, 10, cfg, 0);
  for (auto _ : state) benchmark::DoNotOptimize(optimize(sys, cnot(), c0, cfg));
}
BENCHMARK(BM_OptimizeElectrodeCnot)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
