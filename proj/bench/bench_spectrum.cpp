// SPDX-License-Identifier: Apache-2.0
//
// nfloc: near-field localization with 1-bit DMA receivers
// Copyright (C) 2026 The nfloc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Serial vs OpenMP pseudo-spectrum and the per-candidate combiner solve.

#include <benchmark/benchmark.h>

#include "nfloc/config.hpp"
#include "nfloc/harness.hpp"
#include "nfloc/localizer.hpp"

namespace {

nfloc::TrialSetup setup_for(int n_e, int per_axis)
{
    nfloc::ExperimentConfig cfg;
    cfg.n_e = n_e;
    cfg.counts = {per_axis, per_axis, 1};
    return nfloc::prepare_trial(cfg, 10.0, nfloc::trial_seeds(cfg.seed, 10.0, 0));
}

void BM_SpectrumSerial(benchmark::State& state)
{
    const auto s = setup_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(nfloc::pseudo_spectrum_serial(s.grid, s.channel, s.model, s.spectrum_seed));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(s.grid.size()));
}

void BM_SpectrumParallel(benchmark::State& state)
{
    const auto s = setup_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(nfloc::pseudo_spectrum(s.grid, s.channel, s.model, s.spectrum_seed));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(s.grid.size()));
}

void BM_SolveOp(benchmark::State& state)
{
    const auto s = setup_for(static_cast<int>(state.range(0)), 1);
    const auto h = nfloc::channel_vector(s.model.geometry, s.grid.candidates.front(), s.model.carrier);
    for (auto _ : state)
        benchmark::DoNotOptimize(nfloc::solve_op(h, s.model.propagation, s.model.geometry, s.model.codebook));
}

} // namespace

BENCHMARK(BM_SpectrumSerial)->Args({64, 10})->Args({128, 10})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectrumParallel)->Args({64, 10})->Args({128, 10})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveOp)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
