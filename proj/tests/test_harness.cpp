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

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "nfloc/harness.hpp"
#include "nfloc/seeding.hpp"

using namespace nfloc;

namespace {

ExperimentConfig small_config()
{
    ExperimentConfig cfg;
    cfg.n_e = 8;
    cfg.counts = {3, 3, 1};
    cfg.trials = 6;
    cfg.power_dbm = {0.0, 10.0};
    cfg.seed = 1234;
    return cfg;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ','))
        out.push_back(f);
    return out;
}

} // namespace

TEST_CASE("RMSE accumulator")
{
    RmseAccumulator a;
    for (double e : {1.0, 4.0, 9.0, 16.0})
        a.add(e);
    CHECK(a.count() == 4);
    CHECK(std::abs(a.rmse() - std::sqrt(7.5)) <= 1e-12);

    // delta-method standard error
    const double mean = 7.5;
    double var = 0;
    for (double e : {1.0, 4.0, 9.0, 16.0})
        var += (e - mean) * (e - mean);
    var /= 3.0;
    CHECK(a.standard_error() == doctest::Approx(std::sqrt(var / 4) / (2 * std::sqrt(mean))));

    RmseAccumulator b, c, all;
    for (double e : {0.5, 2.0, 3.0}) {
        b.add(e);
        all.add(e);
    }
    for (double e : {7.0, 0.1}) {
        c.add(e);
        all.add(e);
    }
    b.merge(c);
    CHECK(b.count() == 5);
    CHECK(std::abs(b.rmse() - all.rmse()) <= 1e-12);

    RmseAccumulator one;
    one.add(2.25);
    CHECK(one.rmse() == 1.5);
    CHECK(one.standard_error() == 0.0);
    CHECK(RmseAccumulator{}.rmse() == 0.0);

    const RmsePoint p{0, 1, 10, 0.3}, q{0, 1, 10, 0.4};
    CHECK(pooled_stderr(p, q) == doctest::Approx(0.5));
}

TEST_CASE("seeds")
{
    CHECK(trial_seed(1, 10.0, 3) == trial_seed(1, 10.0, 3));
    CHECK(trial_seed(1, 10.0, 3) != trial_seed(1, 0.0, 3));
    CHECK(trial_seed(1, 10.0, 3) != trial_seed(1, 10.0, 4));
    CHECK(trial_seed(1, 10.0, 3) != trial_seed(2, 10.0, 3));
    // the UE stream is shared across powers, the noise stream is not
    CHECK(trial_seeds(1, 10.0, 3).ue == trial_seeds(1, -10.0, 3).ue);
    CHECK(trial_seeds(1, 10.0, 3).noise != trial_seeds(1, -10.0, 3).noise);
    CHECK(trial_seeds(1, 10.0, 3).ue != trial_seeds(1, 10.0, 4).ue);
}

TEST_CASE("UE draws stay in range")
{
    const auto cfg = small_config();
    for (std::uint64_t s = 0; s < 500; ++s) {
        const auto ue = draw_ue(cfg, s);
        CHECK(ue.r >= 1.0);
        CHECK(ue.r <= 20.0);
        CHECK(ue.theta >= 0.0);
        CHECK(ue.theta <= kPi / 2);
        CHECK(ue.phi == doctest::Approx(kPi / 2));
    }
    auto bad = cfg;
    bad.draw_r_m = {0.001, 0.002};
    bad.n_e = 512;
    CHECK_THROWS((void)draw_ue(bad, 1));
}

TEST_CASE("trials")
{
    auto cfg = small_config();
    const auto seeds = trial_seeds(cfg.seed, 10.0, 0);

    SUBCASE("deterministic")
    {
        const auto a = run_trial(cfg, 10.0, seeds, Method::Proposed1Bit);
        const auto b = run_trial(cfg, 10.0, seeds, Method::Proposed1Bit);
        CHECK(a.squared_error == b.squared_error);
        CHECK(a.estimate.r == b.estimate.r);
        CHECK(a.seed == b.seed);
    }
    SUBCASE("paired methods share the UE draw")
    {
        const auto [p, b] = run_paired_trial(cfg, 10.0, seeds);
        CHECK(p.truth.r == b.truth.r);
        CHECK(p.truth.theta == b.truth.theta);
        CHECK(p.method == Method::Proposed1Bit);
        CHECK(b.method == Method::BaselineFullRes);
        const auto single = baseline_fullres_trial(cfg, 10.0, seeds);
        CHECK(single.squared_error == b.squared_error);
    }
    SUBCASE("single-candidate grid is exact whatever the noise")
    {
        cfg.counts = {1, 1, 1};
        cfg.sigma2_mw = 1e-3;
        for (std::size_t k = 0; k < 5; ++k) {
            const auto s = trial_seeds(cfg.seed, -10.0, k);
            CHECK(run_trial(cfg, -10.0, s, Method::Proposed1Bit).squared_error == 0.0);
            CHECK(baseline_fullres_trial(cfg, -10.0, s).squared_error == 0.0);
        }
    }
    SUBCASE("noiseless on-grid truth")
    {
        cfg.sigma2_mw = 1e-30;
        cfg.draw_r_m = {6.0, 15.0};
        cfg.draw_theta_deg = {10.0, 80.0};
        for (std::size_t k = 0; k < 5; ++k) {
            const auto [p, b] = run_paired_trial(cfg, 10.0, trial_seeds(cfg.seed, 10.0, k));
            CHECK(p.squared_error == 0.0);
            CHECK_FALSE(p.degenerate);
        }
    }
}

TEST_CASE("baseline recovers an on-grid truth inside the radiative near field")
{
    // 512 elements give a ~45 m far bound, so the energy spectrum resolves range
    ExperimentConfig cfg;
    cfg.n_e = 512;
    cfg.sigma2_mw = 1e-30;
    cfg.counts = {5, 5, 1};
    cfg.d_r_m = 1.0;
    cfg.draw_r_m = {2.5, 4.0};
    cfg.draw_theta_deg = {20.0, 70.0};
    // The Lorentzian combiner is not a pure matched filter (j/2 bias, clamped
    // phases), so an occasional one-step miss in range is allowed.
    int exact = 0;
    const int n = 10;
    for (std::size_t k = 0; k < n; ++k) {
        const auto t = baseline_fullres_trial(cfg, 10.0, trial_seeds(3, 10.0, k));
        exact += t.squared_error == 0.0 ? 1 : 0;
        CHECK(std::sqrt(t.squared_error) <= 0.5 + 1e-12);
        CHECK_FALSE(t.beyond_far_field);
    }
    CHECK(exact >= 8);
}

TEST_CASE("sweep")
{
    auto cfg = small_config();
    const auto res = rmse_sweep(cfg);
    REQUIRE(res.curves.size() == 2);
    CHECK(res.trials.size() == 2 * 2 * 6);
    for (const auto& c : res.curves) {
        REQUIRE(c.points.size() == 2);
        CHECK(c.points[0].n_trials == 6);
    }

    SUBCASE("curve matches a direct recomputation")
    {
        RmseAccumulator acc;
        for (std::size_t k = 0; k < 6; ++k)
            acc.add(run_trial(cfg, 10.0, trial_seeds(cfg.seed, 10.0, k), Method::Proposed1Bit).squared_error);
        CHECK(res.curves[0].points[1].rmse_m == acc.rmse());
        CHECK(res.curves[0].points[1].stderr_m == acc.standard_error());
    }
    SUBCASE("one trial")
    {
        cfg.trials = 1;
        cfg.power_dbm = {0.0};
        cfg.method = "proposed";
        const auto one = rmse_sweep(cfg);
        REQUIRE(one.curves.size() == 1);
        const auto t = run_trial(cfg, 0.0, trial_seeds(cfg.seed, 0.0, 0), Method::Proposed1Bit);
        CHECK(one.curves[0].points[0].rmse_m == std::sqrt(t.squared_error));
    }
    SUBCASE("rerun is byte-identical")
    {
        std::ostringstream a, b;
        write_rmse_csv(a, res.curves);
        write_rmse_csv(b, rmse_sweep(cfg).curves);
        CHECK(a.str() == b.str());
    }
    SUBCASE("manifest reproduces the sweep")
    {
        const auto m = make_manifest(cfg, res);
        const auto back = parse_config(m);
        std::ostringstream a, b;
        write_rmse_csv(a, res.curves);
        write_rmse_csv(b, rmse_sweep(back).curves);
        CHECK(a.str() == b.str());
        CHECK(m.at("derived").at("grid_size").get<std::size_t>() == 9);
    }
}

TEST_CASE("RMSE CSV")
{
    std::ostringstream empty;
    write_rmse_csv(empty, {});
    CHECK(empty.str() == "method,p_max_dbm,rmse_m,n_trials,stderr_m\n");

    const double rmse = 0.1 + 0.2; // not exactly representable in short decimal
    const RmseCurve c{Method::BaselineFullRes, {{-7.5, rmse, 42, 1.0 / 3.0}}};
    std::ostringstream os;
    write_rmse_csv(os, {c});
    std::istringstream is(os.str());
    std::string header, line, extra;
    std::getline(is, header);
    std::getline(is, line);
    CHECK_FALSE(std::getline(is, extra));
    const auto f = split(line);
    REQUIRE(f.size() == 5);
    CHECK(f[0] == "baseline-fullres");
    CHECK(std::stod(f[1]) == -7.5);
    CHECK(std::stod(f[2]) == rmse);
    CHECK(f[3] == "42");
    CHECK(std::stod(f[4]) == 1.0 / 3.0);
}
