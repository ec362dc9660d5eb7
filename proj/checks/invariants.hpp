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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nfloc::checks {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

/// Noiseless, on-grid: 20 seeded runs with N_RF=2, N_E=32 and a 5x5 (r, theta) grid must all land on the truth.
CheckResult noiseless_on_grid(int runs = 20, std::uint64_t seed = 7);

/// Gated quantizer outputs are 0 or 0.5(+-1 +-j), and ||y_q||^2 is a multiple of 0.5 up to 0.5 N_RF.
CheckResult quantizer_alphabet(int samples = 100000, std::uint64_t seed = 11);

/// Random admissible weights satisfy |w - j/2| = 1/2 within 1e-12.
CheckResult lorentzian_circle(int samples = 10000, std::uint64_t seed = 13);

/// solve_op never beats the exhaustive optimum and matches it (1e-9 rel.) on >= 95% of instances.
CheckResult combiner_dominance(int instances = 200, std::uint64_t seed = 17);

/// Distances vs the Cartesian oracle and channels vs the compositional oracle agree to 1e-12 rel.
CheckResult oracle_equivalence(int configs = 1000, std::uint64_t seed = 19);

/// mean ||n|| / gamma_q over many draws with N = 256 lies in (0.95, 1.0).
CheckResult threshold_concentration(int draws = 10000, std::uint64_t seed = 23);

/// All of the above with their default sizes.
std::vector<CheckResult> run_invariant_suite();

} // namespace nfloc::checks
