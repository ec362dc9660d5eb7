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
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "nfloc/config.hpp"
#include "nfloc/localizer.hpp"

namespace nfloc {

enum class Method { Proposed1Bit, BaselineFullRes };

[[nodiscard]] std::string_view method_tag(Method m);

/// System model for one transmit power.
[[nodiscard]] SystemModel make_model(const ExperimentConfig& cfg, double power_dbm);
[[nodiscard]] GridSpec make_grid_spec(const ExperimentConfig& cfg);

/// Seed of trial `index` at a given power: hash(master, P_max, index).
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t master, double power_dbm, std::size_t index);

/*!
 * Seeds owned by one trial. The UE draw depends only on (master, index) so
 * trial k sees the same position at every P_max of a sweep; the noise stream
 * comes from trial_seed().
 */
struct TrialSeeds {
    std::uint64_t ue = 0;
    std::uint64_t noise = 0;

    /// Both streams split off a single seed.
    [[nodiscard]] static TrialSeeds from(std::uint64_t seed);
};

[[nodiscard]] TrialSeeds trial_seeds(std::uint64_t master, double power_dbm, std::size_t index);

/// UE position drawn from the configured ranges, kept outside the reactive near field.
[[nodiscard]] UePosition draw_ue(const ExperimentConfig& cfg, std::uint64_t seed);

/// Everything one trial needs before probing: the UE draw, its grid and channel.
struct TrialSetup {
    SystemModel model;
    UePosition truth;
    SearchGrid grid;
    ChannelVector channel;
    std::uint64_t spectrum_seed = 0;
};

[[nodiscard]] TrialSetup prepare_trial(const ExperimentConfig& cfg, double power_dbm, const TrialSeeds& seeds);

struct TrialResult {
    UePosition truth;
    UePosition estimate;
    double squared_error = 0; ///< 3D Cartesian, m^2
    std::uint64_t seed = 0;    ///< noise stream
    std::uint64_t ue_seed = 0; ///< UE draw stream
    double power_dbm = 0;
    Method method = Method::Proposed1Bit;
    bool degenerate = false;
    int tie_count = 1;
    bool beyond_far_field = false; ///< truth farther than 2 D^2 / lambda
};

/// Both methods on the same UE draw, grid, combiners and noise.
[[nodiscard]] std::pair<TrialResult, TrialResult> run_paired_trial(const ExperimentConfig& cfg, double power_dbm,
                                                                   const TrialSeeds& seeds);
[[nodiscard]] TrialResult run_trial(const ExperimentConfig& cfg, double power_dbm, const TrialSeeds& seeds,
                                    Method method);
[[nodiscard]] TrialResult baseline_fullres_trial(const ExperimentConfig& cfg, double power_dbm,
                                                 const TrialSeeds& seeds);

/// Running sums for RMSE and its delta-method standard error.
class RmseAccumulator {
public:
    void add(double squared_error);
    void merge(const RmseAccumulator& other);

    [[nodiscard]] std::size_t count() const { return n_; }
    [[nodiscard]] double rmse() const;
    /// Standard error of the RMSE: sd(e^2) / (2 RMSE sqrt(n)); 0 for n < 2.
    [[nodiscard]] double standard_error() const;

private:
    std::size_t n_ = 0;
    double sum_sq_ = 0;
    double sum_sq2_ = 0;
};

struct RmsePoint {
    double power_dbm = 0;
    double rmse_m = 0;
    std::size_t n_trials = 0;
    double stderr_m = 0;
};

struct RmseCurve {
    Method method = Method::Proposed1Bit;
    std::vector<RmsePoint> points;
};

struct SweepResult {
    std::vector<RmseCurve> curves;
    std::vector<TrialResult> trials; ///< power-major, trial index, then method
    std::size_t beyond_far_field = 0;
};

/// Paired Monte Carlo trials for every power in the sweep; trials run in parallel.
[[nodiscard]] SweepResult rmse_sweep(const ExperimentConfig& cfg);

/// Pooled standard error of the difference of two RMSE estimates.
[[nodiscard]] double pooled_stderr(const RmsePoint& a, const RmsePoint& b);

/// method,p_max_dbm,rmse_m,n_trials,stderr_m
void write_rmse_csv(std::ostream& os, const std::vector<RmseCurve>& curves);
void write_trials_csv(std::ostream& os, const std::vector<TrialResult>& trials);
[[nodiscard]] nlohmann::json make_manifest(const ExperimentConfig& cfg, const SweepResult& result);

/// Writes rmse.csv, trials.csv and manifest.json into `dir` (created if missing).
void emit_results(const ExperimentConfig& cfg, const SweepResult& result, const std::filesystem::path& dir);

} // namespace nfloc
