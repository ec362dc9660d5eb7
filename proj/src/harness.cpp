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

#include "nfloc/harness.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "nfloc/format.hpp"
#include "nfloc/seeding.hpp"

namespace nfloc {

namespace {

constexpr double kDeg = kPi / 180.0;

// Sub-stream keys.
constexpr std::uint64_t kUeStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kUeDomain = 0x75652d64726177; // keeps UE draws apart from trial_seed()

ArrayGeometry make_geometry(const ExperimentConfig& cfg)
{
    const double lambda = cfg.wavelength();
    ArrayGeometry g{cfg.n_rf, cfg.n_e, cfg.d_rf_wavelengths * lambda, cfg.d_e_wavelengths * lambda};
    g.validate();
    return g;
}

CarrierConfig make_carrier(const ExperimentConfig& cfg)
{
    return CarrierConfig::from_frequency(cfg.carrier_frequency_hz, cfg.kappa_abs, cfg.boresight_exponent);
}

double squared_distance(const UePosition& a, const UePosition& b)
{
    const double d = cartesian_distance(to_cartesian(a), to_cartesian(b));
    return d * d;
}

} // namespace

std::string_view method_tag(Method m)
{
    return m == Method::Proposed1Bit ? "proposed-1bit" : "baseline-fullres";
}

SystemModel make_model(const ExperimentConfig& cfg, double power_dbm)
{
    const auto geom = make_geometry(cfg);
    const auto wg = WaveguideConfig::uniform(geom, cfg.waveguide_alpha, cfg.beta());
    return SystemModel::make(geom, make_carrier(cfg), wg, cfg.codebook_bits, PilotConfig::full_power(power_dbm),
                             cfg.sigma2());
}

GridSpec make_grid_spec(const ExperimentConfig& cfg)
{
    const auto fb = fresnel_bounds(make_geometry(cfg), make_carrier(cfg));
    GridSpec spec;
    spec.d_r = cfg.d_r_m;
    spec.d_theta = cfg.d_theta_deg * kDeg;
    spec.d_phi = cfg.d_phi_deg * kDeg;
    spec.counts = cfg.counts;
    spec.valid_r = {std::max(cfg.valid_r_m[0], fb.near), cfg.valid_r_m[1]};
    spec.valid_theta = {cfg.valid_theta_deg[0] * kDeg, cfg.valid_theta_deg[1] * kDeg};
    spec.valid_phi = {cfg.valid_phi_deg[0] * kDeg, cfg.valid_phi_deg[1] * kDeg};
    return spec;
}

std::uint64_t trial_seed(std::uint64_t master, double power_dbm, std::size_t index)
{
    return derive_seed(derive_seed(master, power_dbm), static_cast<std::uint64_t>(index));
}

TrialSeeds TrialSeeds::from(std::uint64_t seed)
{
    return {derive_seed(seed, kUeStream), derive_seed(seed, kNoiseStream)};
}

TrialSeeds trial_seeds(std::uint64_t master, double power_dbm, std::size_t index)
{
    return {derive_seed(derive_seed(master, kUeDomain), static_cast<std::uint64_t>(index)),
            derive_seed(trial_seed(master, power_dbm, index), kNoiseStream)};
}

UePosition draw_ue(const ExperimentConfig& cfg, std::uint64_t seed)
{
    const auto fb = fresnel_bounds(make_geometry(cfg), make_carrier(cfg));
    const double r_lo = std::max(cfg.draw_r_m[0], fb.near);
    if (r_lo > cfg.draw_r_m[1])
        throw std::invalid_argument("draw_ue: radial draw range lies inside the reactive near field");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u_r = unit(rng);
    const double u_t = unit(rng);
    UePosition ue{r_lo + u_r * (cfg.draw_r_m[1] - r_lo),
                  (cfg.draw_theta_deg[0] + u_t * (cfg.draw_theta_deg[1] - cfg.draw_theta_deg[0])) * kDeg,
                  cfg.ue_phi_deg * kDeg};
    ue.validate();
    return ue;
}

TrialSetup prepare_trial(const ExperimentConfig& cfg, double power_dbm, const TrialSeeds& seeds)
{
    auto model = make_model(cfg, power_dbm);
    const auto truth = draw_ue(cfg, seeds.ue);
    const UePosition prior{truth.r + cfg.prior_offset_r_m, truth.theta + cfg.prior_offset_theta_deg * kDeg,
                           truth.phi + cfg.prior_offset_phi_deg * kDeg};
    auto grid = build_grid(prior, make_grid_spec(cfg));
    auto h = channel_vector(model.geometry, truth, model.carrier);
    return {std::move(model), truth, std::move(grid), std::move(h), seeds.noise};
}

std::pair<TrialResult, TrialResult> run_paired_trial(const ExperimentConfig& cfg, double power_dbm,
                                                     const TrialSeeds& seeds)
{
    const auto setup = prepare_trial(cfg, power_dbm, seeds);
    const auto& truth = setup.truth;
    const auto& grid = setup.grid;
    const auto fb = fresnel_bounds(setup.model.geometry, setup.model.carrier);
    const auto spectrum = pseudo_spectrum(grid, setup.channel, setup.model, setup.spectrum_seed);

    const auto fill = [&](Method m, const PositionEstimate& est) {
        TrialResult t;
        t.truth = truth;
        t.estimate = est.position;
        t.squared_error = squared_distance(truth, est.position);
        t.seed = seeds.noise;
        t.ue_seed = seeds.ue;
        t.power_dbm = power_dbm;
        t.method = m;
        t.degenerate = est.degenerate;
        t.tie_count = est.tie_count;
        t.beyond_far_field = truth.r > fb.far;
        return t;
    };
    return {fill(Method::Proposed1Bit, estimate_position(spectrum, grid)),
            fill(Method::BaselineFullRes, estimate_by_energy(spectrum, grid))};
}

TrialResult run_trial(const ExperimentConfig& cfg, double power_dbm, const TrialSeeds& seeds, Method method)
{
    auto [proposed, baseline] = run_paired_trial(cfg, power_dbm, seeds);
    return method == Method::Proposed1Bit ? proposed : baseline;
}

TrialResult baseline_fullres_trial(const ExperimentConfig& cfg, double power_dbm, const TrialSeeds& seeds)
{
    return run_trial(cfg, power_dbm, seeds, Method::BaselineFullRes);
}

void RmseAccumulator::add(double squared_error)
{
    ++n_;
    sum_sq_ += squared_error;
    sum_sq2_ += squared_error * squared_error;
}

void RmseAccumulator::merge(const RmseAccumulator& other)
{
    n_ += other.n_;
    sum_sq_ += other.sum_sq_;
    sum_sq2_ += other.sum_sq2_;
}

double RmseAccumulator::rmse() const { return n_ == 0 ? 0.0 : std::sqrt(sum_sq_ / static_cast<double>(n_)); }

double RmseAccumulator::standard_error() const
{
    if (n_ < 2)
        return 0.0;
    const double n = static_cast<double>(n_);
    const double mean = sum_sq_ / n;
    const double var = std::max(0.0, (sum_sq2_ - n * mean * mean) / (n - 1.0));
    const double r = std::sqrt(mean);
    return r > 0.0 ? std::sqrt(var / n) / (2.0 * r) : 0.0;
}

double pooled_stderr(const RmsePoint& a, const RmsePoint& b)
{
    return std::sqrt(a.stderr_m * a.stderr_m + b.stderr_m * b.stderr_m);
}

SweepResult rmse_sweep(const ExperimentConfig& cfg)
{
    cfg.validate();
    const std::size_t per_power = static_cast<std::size_t>(cfg.trials);
    const std::size_t jobs = cfg.power_dbm.size() * per_power;
    std::vector<std::pair<TrialResult, TrialResult>> paired(jobs);
    std::exception_ptr error;

#pragma omp parallel for schedule(dynamic)
    for (long job = 0; job < static_cast<long>(jobs); ++job) {
        const auto j = static_cast<std::size_t>(job);
        const double p = cfg.power_dbm[j / per_power];
        try {
            paired[j] = run_paired_trial(cfg, p, trial_seeds(cfg.seed, p, j % per_power));
        } catch (...) {
#pragma omp critical(nfloc_sweep_error)
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);

    const bool want_proposed = cfg.method != "baseline";
    const bool want_baseline = cfg.method != "proposed";

    SweepResult out;
    RmseCurve proposed{Method::Proposed1Bit, {}};
    RmseCurve baseline{Method::BaselineFullRes, {}};
    for (std::size_t pi = 0; pi < cfg.power_dbm.size(); ++pi) {
        RmseAccumulator acc_p, acc_b;
        for (std::size_t t = 0; t < per_power; ++t) {
            const auto& [tp, tb] = paired[pi * per_power + t];
            out.beyond_far_field += tp.beyond_far_field ? 1 : 0;
            if (want_proposed) {
                acc_p.add(tp.squared_error);
                out.trials.push_back(tp);
            }
            if (want_baseline) {
                acc_b.add(tb.squared_error);
                out.trials.push_back(tb);
            }
        }
        const double p = cfg.power_dbm[pi];
        proposed.points.push_back({p, acc_p.rmse(), acc_p.count(), acc_p.standard_error()});
        baseline.points.push_back({p, acc_b.rmse(), acc_b.count(), acc_b.standard_error()});
    }
    if (want_proposed)
        out.curves.push_back(std::move(proposed));
    if (want_baseline)
        out.curves.push_back(std::move(baseline));
    return out;
}

void write_rmse_csv(std::ostream& os, const std::vector<RmseCurve>& curves)
{
    os << "method,p_max_dbm,rmse_m,n_trials,stderr_m\n";
    for (const auto& c : curves)
        for (const auto& p : c.points)
            os << method_tag(c.method) << ',' << format_double(p.power_dbm) << ',' << format_double(p.rmse_m) << ','
               << p.n_trials << ',' << format_double(p.stderr_m) << '\n';
}

void write_trials_csv(std::ostream& os, const std::vector<TrialResult>& trials)
{
    os << "method,p_max_dbm,seed,ue_seed,r_true_m,theta_true_rad,phi_true_rad,r_est_m,theta_est_rad,phi_est_rad,"
          "sq_error_m2,degenerate,tie_count\n";
    for (const auto& t : trials)
        os << method_tag(t.method) << ',' << format_double(t.power_dbm) << ',' << t.seed << ',' << t.ue_seed << ','
           << format_double(t.truth.r) << ',' << format_double(t.truth.theta) << ',' << format_double(t.truth.phi)
           << ',' << format_double(t.estimate.r) << ',' << format_double(t.estimate.theta) << ','
           << format_double(t.estimate.phi) << ',' << format_double(t.squared_error) << ',' << (t.degenerate ? 1 : 0)
           << ',' << t.tie_count << '\n';
}

nlohmann::json make_manifest(const ExperimentConfig& cfg, const SweepResult& result)
{
    const auto model = make_model(cfg, cfg.power_dbm.front());
    const auto fb = fresnel_bounds(model.geometry, model.carrier);
    nlohmann::json j;
    j["config"] = cfg;
    j["derived"] = {
        {"wavelength_m", model.carrier.wavelength},
        {"sigma2_mw", model.sigma2},
        {"gamma_q", noise_threshold(model.geometry.size(), model.sigma2)},
        {"waveguide_beta_rad_per_m", cfg.beta()},
        {"aperture_diagonal_m", aperture_diagonal(model.geometry)},
        {"fresnel_near_m", fb.near},
        {"fresnel_far_m", fb.far},
        {"grid_size", cfg.grid_size()},
    };
    j["metric"] = "RMSE of the 3D Cartesian position error in meters";
    j["seeding"] = "trial seed = derive(derive(seed, bits(P_max_dbm)), trial index); "
                   "spectrum noise = derive(trial seed, 2); candidate p noise = derive(spectrum noise, p); "
                   "UE draw = derive(derive(seed, 0x75652d64726177), trial index), shared across P_max";
    j["trials_beyond_far_field"] = result.beyond_far_field;
    return j;
}

void emit_results(const ExperimentConfig& cfg, const SweepResult& result, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const auto open = [&](const char* name) {
        std::ofstream os(dir / name, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot write " + (dir / name).string());
        return os;
    };
    {
        auto os = open("rmse.csv");
        write_rmse_csv(os, result.curves);
    }
    {
        auto os = open("trials.csv");
        write_trials_csv(os, result.trials);
    }
    {
        auto os = open("manifest.json");
        os << make_manifest(cfg, result).dump(2) << '\n';
    }
}

} // namespace nfloc
