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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nfloc {

/// Simulation settings. Angles are degrees and lengths meters at this level;
/// everything downstream works in radians.
struct ExperimentConfig {
    // carrier and channel
    double carrier_frequency_hz = 140e9;
    double kappa_abs = 0.0075;
    double boresight_exponent = 2.0;

    // noise
    double bandwidth_hz = 150e3;
    std::optional<double> sigma2_mw; ///< overrides the thermal value when set

    // aperture
    int n_rf = 2;
    int n_e = 64;
    double d_rf_wavelengths = 0.5;
    double d_e_wavelengths = 0.2;

    // waveguide; beta defaults to the free-space wavenumber
    double waveguide_alpha = 0.0;
    std::optional<double> waveguide_beta;

    int codebook_bits = 10;

    // experiment
    std::vector<double> power_dbm{-10.0, 0.0, 10.0, 20.0};
    int trials = 100;
    std::string method = "both"; ///< proposed | baseline | both
    std::uint64_t seed = 1;

    // search grid
    double d_r_m = 5.0;
    double d_theta_deg = 10.0;
    double d_phi_deg = 0.0;
    std::array<int, 3> counts{10, 20, 1};

    // UE draws and valid coordinate ranges
    std::array<double, 2> draw_r_m{1.0, 20.0};
    std::array<double, 2> draw_theta_deg{0.0, 90.0};
    double ue_phi_deg = 90.0;
    std::array<double, 2> valid_r_m{1.0, 20.0};
    std::array<double, 2> valid_theta_deg{0.0, 90.0};
    std::array<double, 2> valid_phi_deg{0.0, 180.0};

    // grid center = truth + offset
    double prior_offset_r_m = 0.0;
    double prior_offset_theta_deg = 0.0;
    double prior_offset_phi_deg = 0.0;

    [[nodiscard]] double wavelength() const;
    [[nodiscard]] double sigma2() const;
    [[nodiscard]] double beta() const;
    [[nodiscard]] std::size_t grid_size() const;
    void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

/// Reads a config file. A run manifest is accepted too; its "config" member is used.
[[nodiscard]] ExperimentConfig load_config(const std::string& path);
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& j);

} // namespace nfloc
