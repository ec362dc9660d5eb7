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

#include "nfloc/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "nfloc/geometry_channel.hpp"
#include "nfloc/quantized_frontend.hpp"

namespace nfloc {

using nlohmann::json;

double ExperimentConfig::wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }

double ExperimentConfig::sigma2() const { return sigma2_mw ? *sigma2_mw : thermal_noise_mw(bandwidth_hz); }

double ExperimentConfig::beta() const { return waveguide_beta ? *waveguide_beta : 2.0 * kPi / wavelength(); }

std::size_t ExperimentConfig::grid_size() const
{
    return static_cast<std::size_t>(counts[0]) * static_cast<std::size_t>(counts[1]) *
           static_cast<std::size_t>(counts[2]);
}

void ExperimentConfig::validate() const
{
    const auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
    if (!(carrier_frequency_hz > 0))
        fail("carrier frequency must be positive");
    if (!(bandwidth_hz > 0))
        fail("bandwidth must be positive");
    if (sigma2_mw && !(*sigma2_mw >= 0))
        fail("sigma2_mw must be >= 0");
    if (!(kappa_abs >= 0) || !(boresight_exponent >= 0))
        fail("kappa_abs and boresight exponent must be >= 0");
    if (n_rf < 1 || n_e < 1)
        fail("n_rf and n_e must be >= 1");
    if (!(d_rf_wavelengths > 0) || !(d_e_wavelengths > 0))
        fail("element spacings must be positive");
    if (!(waveguide_alpha >= 0))
        fail("waveguide alpha must be >= 0");
    if (waveguide_beta && !(*waveguide_beta > 0))
        fail("waveguide beta must be positive");
    if (codebook_bits < 1 || codebook_bits > 20)
        fail("codebook bits must be in [1, 20]");
    if (power_dbm.empty())
        fail("power sweep is empty");
    if (trials < 1)
        fail("trials must be >= 1");
    if (method != "proposed" && method != "baseline" && method != "both")
        fail("method must be proposed, baseline or both");
    if (!(d_r_m >= 0) || !(d_theta_deg >= 0) || !(d_phi_deg >= 0))
        fail("confidence half-widths must be >= 0");
    for (int c : counts)
        if (c < 1)
            fail("grid counts must be >= 1");
    const auto ordered = [](const std::array<double, 2>& a) { return a[0] <= a[1]; };
    if (!ordered(draw_r_m) || !ordered(draw_theta_deg) || !ordered(valid_r_m) || !ordered(valid_theta_deg) ||
        !ordered(valid_phi_deg))
        fail("ranges must be ordered [lo, hi]");
    if (!(draw_r_m[0] > 0) || !(valid_r_m[0] > 0))
        fail("radial ranges must be positive");
    if (draw_theta_deg[0] < 0 || draw_theta_deg[1] > 90 || valid_theta_deg[0] < 0 || valid_theta_deg[1] > 90)
        fail("elevation ranges must lie in [0, 90] degrees");
    if (ue_phi_deg < 0 || ue_phi_deg > 180 || valid_phi_deg[0] < 0 || valid_phi_deg[1] > 180)
        fail("azimuth must lie in [0, 180] degrees");
}

void to_json(json& j, const ExperimentConfig& c)
{
    j = json{
        {"carrier", {{"frequency_hz", c.carrier_frequency_hz},
                     {"kappa_abs_per_m", c.kappa_abs},
                     {"boresight_exponent", c.boresight_exponent}}},
        {"noise", {{"bandwidth_hz", c.bandwidth_hz},
                   {"sigma2_mw", c.sigma2_mw ? json(*c.sigma2_mw) : json(nullptr)}}},
        {"geometry", {{"n_rf", c.n_rf},
                      {"n_e", c.n_e},
                      {"d_rf_wavelengths", c.d_rf_wavelengths},
                      {"d_e_wavelengths", c.d_e_wavelengths}}},
        {"waveguide", {{"alpha_per_m", c.waveguide_alpha},
                       {"beta_rad_per_m", c.waveguide_beta ? json(*c.waveguide_beta) : json(nullptr)}}},
        {"codebook_bits", c.codebook_bits},
        {"power_dbm", c.power_dbm},
        {"trials", c.trials},
        {"method", c.method},
        {"seed", c.seed},
        {"grid", {{"d_r_m", c.d_r_m},
                  {"d_theta_deg", c.d_theta_deg},
                  {"d_phi_deg", c.d_phi_deg},
                  {"counts", c.counts}}},
        {"ue", {{"draw_r_m", c.draw_r_m},
                {"draw_theta_deg", c.draw_theta_deg},
                {"phi_deg", c.ue_phi_deg},
                {"valid_r_m", c.valid_r_m},
                {"valid_theta_deg", c.valid_theta_deg},
                {"valid_phi_deg", c.valid_phi_deg}}},
        {"prior_offset", {{"r_m", c.prior_offset_r_m},
                          {"theta_deg", c.prior_offset_theta_deg},
                          {"phi_deg", c.prior_offset_phi_deg}}},
    };
}

namespace {

template <typename T>
void read(const json& obj, const char* key, T& out)
{
    if (obj.contains(key))
        obj.at(key).get_to(out);
}

void read_optional(const json& obj, const char* key, std::optional<double>& out)
{
    if (!obj.contains(key))
        return;
    const auto& v = obj.at(key);
    out = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
}

const json& section(const json& j, const char* key)
{
    static const json empty = json::object();
    return j.contains(key) ? j.at(key) : empty;
}

} // namespace

void from_json(const json& j, ExperimentConfig& c)
{
    const auto& carrier = section(j, "carrier");
    read(carrier, "frequency_hz", c.carrier_frequency_hz);
    read(carrier, "kappa_abs_per_m", c.kappa_abs);
    read(carrier, "boresight_exponent", c.boresight_exponent);

    const auto& noise = section(j, "noise");
    read(noise, "bandwidth_hz", c.bandwidth_hz);
    read_optional(noise, "sigma2_mw", c.sigma2_mw);

    const auto& geom = section(j, "geometry");
    read(geom, "n_rf", c.n_rf);
    read(geom, "n_e", c.n_e);
    read(geom, "d_rf_wavelengths", c.d_rf_wavelengths);
    read(geom, "d_e_wavelengths", c.d_e_wavelengths);

    const auto& wg = section(j, "waveguide");
    read(wg, "alpha_per_m", c.waveguide_alpha);
    read_optional(wg, "beta_rad_per_m", c.waveguide_beta);

    read(j, "codebook_bits", c.codebook_bits);
    read(j, "power_dbm", c.power_dbm);
    read(j, "trials", c.trials);
    read(j, "method", c.method);
    read(j, "seed", c.seed);

    const auto& grid = section(j, "grid");
    read(grid, "d_r_m", c.d_r_m);
    read(grid, "d_theta_deg", c.d_theta_deg);
    read(grid, "d_phi_deg", c.d_phi_deg);
    read(grid, "counts", c.counts);

    const auto& ue = section(j, "ue");
    read(ue, "draw_r_m", c.draw_r_m);
    read(ue, "draw_theta_deg", c.draw_theta_deg);
    read(ue, "phi_deg", c.ue_phi_deg);
    read(ue, "valid_r_m", c.valid_r_m);
    read(ue, "valid_theta_deg", c.valid_theta_deg);
    read(ue, "valid_phi_deg", c.valid_phi_deg);

    const auto& prior = section(j, "prior_offset");
    read(prior, "r_m", c.prior_offset_r_m);
    read(prior, "theta_deg", c.prior_offset_theta_deg);
    read(prior, "phi_deg", c.prior_offset_phi_deg);
}

ExperimentConfig parse_config(const json& j)
{
    const json& body = j.contains("config") ? j.at("config") : j;
    ExperimentConfig c = body.get<ExperimentConfig>();
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config file " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

} // namespace nfloc
