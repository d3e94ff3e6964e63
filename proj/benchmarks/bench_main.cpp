// Copyright 2026 The Bellgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "bellgate/experiment.hpp"
#include "bellgate/sources.hpp"

namespace {

using namespace bellgate;

void BM_GateChannel(benchmark::State &state) {
    const double v = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(gate_channel(v));
}
BENCHMARK(BM_GateChannel)->Arg(0)->Arg(93)->Arg(100);

void BM_Bsa(benchmark::State &state) {
    const GateChannel ch = gate_channel(0.93);
    const DensityMatrix rho = kron(make_pair(PairSpec{BellState::PhiPlus, 0.05, {"a", "b"}}),
                                   make_pair(PairSpec{BellState::PhiPlus, 0.05, {"c", "d"}}));
    for (auto _ : state) benchmark::DoNotOptimize(bsa(rho, ch));
}
BENCHMARK(BM_Bsa);

void BM_Teleport(benchmark::State &state) {
    const GateChannel ch = gate_channel(0.93);
    const DensityMatrix pair = make_pair(PairSpec{BellState::PhiPlus, 0.01});
    const DensityMatrix input = make_input(InputSpec::named("+", 0.14));
    for (auto _ : state) benchmark::DoNotOptimize(teleport(input, pair, ch, true));
}
BENCHMARK(BM_Teleport);

void BM_ExactPrediction(benchmark::State &state) {
    for (auto _ : state) benchmark::DoNotOptimize(exact_prediction(0.93, 0.01, 0.14));
}
BENCHMARK(BM_ExactPrediction);

void BM_Mle(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const DensityMatrix rho = n == 1 ? make_input(InputSpec::named("R", 0.2), "q0")
                                     : make_pair(PairSpec{BellState::PsiMinus, 0.2, {"q0", "q1"}});
    Labels modes = n == 1 ? Labels{"q0"} : Labels{"q0", "q1"};
    const CountTable t = simulate_counts(tomography_distribution(rho), 1000.0, {}, modes, 1);
    for (auto _ : state) benchmark::DoNotOptimize(mle_fit(t));
}
BENCHMARK(BM_Mle)->Arg(1)->Arg(2);

void BM_RunSwap(benchmark::State &state) {
    ExperimentConfig c;
    c.protocol = Protocol::Swap;
    c.overlap = 0.93;
    c.pair_mixedness = 0.01;
    c.counts_per_setting = 500;
    c.bootstrap_resamples = 100;
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c));
}
BENCHMARK(BM_RunSwap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
