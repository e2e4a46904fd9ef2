// Copyright 2026 The critsense Authors
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

#include "critsense/dynamics.hpp"
#include "critsense/fock.hpp"
#include "critsense/measurement.hpp"
#include "critsense/units.hpp"

namespace {

using namespace critsense;
using units::khz;

PhysicalParams bright_point() {
    return PhysicalParams::overcoupled(khz(-150.0), khz(300.0), khz(-9.14), khz(72.0));
}

void BM_LiouvillianBuild(benchmark::State& state) {
    const FockSpace space(static_cast<int>(state.range(0)));
    const PhysicalParams p = bright_point();
    for (auto _ : state) {
        benchmark::DoNotOptimize(liouvillian(p, space));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LiouvillianBuild)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_SteadyStateLU(benchmark::State& state) {
    const Liouvillian liou = liouvillian(bright_point(), FockSpace(static_cast<int>(state.range(0))));
    SteadyStateOptions opts;
    opts.chain = {SteadyStateMethod::DirectLU};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_steady_state(liou, opts));
    }
}
BENCHMARK(BM_SteadyStateLU)->Arg(40)->Arg(80)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_TraceSynthesis(benchmark::State& state) {
    const MeasurementModel model = MeasurementModel::experiment(khz(36.0));
    const PowerMoments target{10.0, 30.0};
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(synthesize_traces(target, model, m, 7));
    }
    state.SetItemsProcessed(state.iterations() * m * model.bins());
}
BENCHMARK(BM_TraceSynthesis)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_EstimateMoments(benchmark::State& state) {
    const MeasurementModel model = MeasurementModel::experiment(khz(36.0));
    const TraceEnsemble te = synthesize_traces({10.0, 30.0}, model, 10000, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_moments(te));
    }
}
BENCHMARK(BM_EstimateMoments)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
