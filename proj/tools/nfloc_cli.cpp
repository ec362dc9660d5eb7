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

// nfloc: command-line front end.
//
//   nfloc sweep    --config cfg.json --out results/   RMSE vs P_max for both methods
//   nfloc spectrum --config cfg.json --out results/   dump one pseudo-spectrum
//   nfloc validate                                    run the invariant suite

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "invariants.hpp"
#include "nfloc/config.hpp"
#include "nfloc/harness.hpp"
#include "nfloc/localizer.hpp"

namespace {

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "nfloc_out";
    std::optional<int> trials;
    std::optional<std::string> method;
    std::optional<double> power_dbm;
    std::size_t trial_index = 0;
};

nfloc::ExperimentConfig resolve(const Options& o)
{
    nfloc::ExperimentConfig cfg = o.config_path.empty() ? nfloc::ExperimentConfig{} : nfloc::load_config(o.config_path);
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.trials)
        cfg.trials = *o.trials;
    if (o.method)
        cfg.method = *o.method;
    cfg.validate();
    return cfg;
}

int cmd_sweep(const Options& o)
{
    const auto cfg = resolve(o);
    std::cerr << "sweep: N_RF=" << cfg.n_rf << " N_E=" << cfg.n_e << " T=" << cfg.grid_size()
              << " trials=" << cfg.trials << " powers=" << cfg.power_dbm.size() << "\n";
    const auto result = nfloc::rmse_sweep(cfg);
    nfloc::emit_results(cfg, result, o.out_dir);
    nfloc::write_rmse_csv(std::cout, result.curves);
    if (result.beyond_far_field > 0)
        std::cerr << "note: " << result.beyond_far_field << " UE draws lie beyond the Fresnel far bound\n";
    return 0;
}

int cmd_spectrum(const Options& o)
{
    const auto cfg = resolve(o);
    const double p = o.power_dbm ? *o.power_dbm : cfg.power_dbm.front();
    const auto setup = nfloc::prepare_trial(cfg, p, nfloc::trial_seeds(cfg.seed, p, o.trial_index));
    const auto& truth = setup.truth;
    const auto& grid = setup.grid;
    const auto spectrum = nfloc::pseudo_spectrum(grid, setup.channel, setup.model, setup.spectrum_seed);
    const auto est = nfloc::estimate_position(spectrum, grid);
    const auto base = nfloc::estimate_by_energy(spectrum, grid);
    const auto error = [&](const nfloc::UePosition& e) {
        return nfloc::cartesian_distance(nfloc::to_cartesian(truth), nfloc::to_cartesian(e));
    };

    std::filesystem::create_directories(o.out_dir);
    const auto path = std::filesystem::path(o.out_dir) / "spectrum.csv";
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    nfloc::write_spectrum_csv(os, grid, spectrum);

    std::cout << std::setprecision(10) << "truth     r=" << truth.r << " theta=" << truth.theta
              << " phi=" << truth.phi << "\n"
              << "estimate  r=" << est.position.r << " theta=" << est.position.theta << " phi=" << est.position.phi
              << " (index " << est.index << ", score " << est.peak_score << ", ties " << est.tie_count
              << (est.degenerate ? ", degenerate" : "") << ")\n"
              << "error     proposed " << error(est.position) << " m, baseline " << error(base.position) << " m\n"
              << "clamped Lorentzian weights: " << spectrum.clamped_weights << "\n"
              << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_validate()
{
    bool ok = true;
    for (const auto& r : nfloc::checks::run_invariant_suite()) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << " (" << std::fixed
                  << std::setprecision(2) << r.seconds << " s)\n";
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Near-field localization with a 1-bit DMA receiver"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--config", o.config_path, "JSON config or run manifest")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "master seed (overrides config)");
    app.add_option("--out", o.out_dir, "output directory");
    app.add_option("--trials", o.trials, "Monte Carlo trials per power (overrides config)")->check(CLI::PositiveNumber);
    app.add_option("--method", o.method, "proposed | baseline | both")
        ->check(CLI::IsMember({"proposed", "baseline", "both"}));

    auto* sweep = app.add_subcommand("sweep", "RMSE versus transmit power");
    auto* spectrum = app.add_subcommand("spectrum", "dump one pseudo-spectrum");
    spectrum->add_option("--power", o.power_dbm, "P_max in dBm (default: first sweep value)");
    spectrum->add_option("--trial", o.trial_index, "trial index used for the seed");
    auto* validate = app.add_subcommand("validate", "run the invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep)
            return cmd_sweep(o);
        if (*spectrum)
            return cmd_spectrum(o);
        if (*validate)
            return cmd_validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
