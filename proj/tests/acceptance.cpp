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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
//   acceptance [--workdir DIR] [--only N]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "invariants.hpp"
#include "nfloc/config.hpp"
#include "nfloc/harness.hpp"

namespace fs = std::filesystem;
using nfloc::checks::CheckResult;

namespace {

// Pinned tolerances and budgets.
constexpr double kOnGridBudgetS = 10.0;
constexpr double kSnrSweepBudgetS = 600.0;
constexpr double kTrendTolerancePooledSe = 1.0;
constexpr int kPairedTrials = 100;

nfloc::ExperimentConfig desk_config(int n_e, std::array<int, 3> counts, std::vector<double> powers)
{
    nfloc::ExperimentConfig cfg;
    cfg.n_rf = 2;
    cfg.n_e = n_e;
    cfg.counts = counts;
    cfg.d_phi_deg = 10.0;
    cfg.trials = kPairedTrials;
    cfg.power_dbm = std::move(powers);
    cfg.seed = 20260101;
    return cfg;
}

const nfloc::RmseCurve& proposed(const nfloc::SweepResult& r)
{
    for (const auto& c : r.curves)
        if (c.method == nfloc::Method::Proposed1Bit)
            return c;
    throw std::logic_error("sweep without proposed curve");
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

template <typename F>
CheckResult timed(std::string name, F&& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r{std::move(name), false, {}, 0.0};
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

CheckResult with_budget(CheckResult r, double budget_s)
{
    if (r.seconds >= budget_s) {
        r.passed = false;
        r.detail += ", over the " + fmt(budget_s) + " s budget";
    }
    return r;
}

CheckResult snr_trend()
{
    auto r = timed("SNR monotonicity", [](CheckResult& out) {
        const auto res = nfloc::rmse_sweep(desk_config(64, {5, 5, 5}, {-10.0, 0.0, 10.0, 20.0}));
        const auto& pts = proposed(res).points;
        double worst = -1e300;
        std::ostringstream os;
        os << "RMSE";
        for (std::size_t k = 0; k < pts.size(); ++k) {
            os << (k ? " / " : " ") << fmt(pts[k].rmse_m);
            if (k > 0) {
                const double excess =
                    pts[k].rmse_m - pts[k - 1].rmse_m - kTrendTolerancePooledSe * nfloc::pooled_stderr(pts[k], pts[k - 1]);
                worst = std::max(worst, excess);
            }
        }
        const double end_to_end = pts.back().rmse_m - pts.front().rmse_m;
        os << " m at -10/0/10/20 dBm; worst step excess over 1 pooled SE " << fmt(worst) << " m; end-to-end change "
           << fmt(end_to_end) << " m (pooled SE " << fmt(nfloc::pooled_stderr(pts.back(), pts.front())) << ")";
        out.passed = worst <= 0.0;
        out.detail = os.str();
    });
    return with_budget(r, kSnrSweepBudgetS);
}

CheckResult aperture_trend()
{
    return timed("aperture-size trend", [](CheckResult& out) {
        const auto small = nfloc::rmse_sweep(desk_config(32, {5, 5, 5}, {10.0}));
        const auto large = nfloc::rmse_sweep(desk_config(128, {5, 5, 5}, {10.0}));
        const auto& a = proposed(small).points.front();
        const auto& b = proposed(large).points.front();
        const double se = nfloc::pooled_stderr(a, b);
        out.passed = b.rmse_m <= a.rmse_m + kTrendTolerancePooledSe * se;
        out.detail = "RMSE N_E=32 " + fmt(a.rmse_m) + " m, N_E=128 " + fmt(b.rmse_m) + " m, pooled SE " + fmt(se) + " m";
    });
}

CheckResult overhead_trend()
{
    return timed("overhead trade-off", [](CheckResult& out) {
        const auto coarse = nfloc::rmse_sweep(desk_config(64, {4, 4, 4}, {10.0}));
        const auto fine = nfloc::rmse_sweep(desk_config(64, {6, 6, 6}, {10.0}));
        const auto& a = proposed(coarse).points.front();
        const auto& b = proposed(fine).points.front();
        const double se = nfloc::pooled_stderr(a, b);
        std::size_t degenerate = 0;
        for (const auto* res : {&coarse, &fine})
            for (const auto& t : res->trials)
                degenerate += (t.method == nfloc::Method::Proposed1Bit && t.degenerate) ? 1 : 0;
        out.passed = b.rmse_m <= a.rmse_m + kTrendTolerancePooledSe * se;
        out.detail = "RMSE T=64 " + fmt(a.rmse_m) + " m, T=216 " + fmt(b.rmse_m) + " m, pooled SE " + fmt(se) +
                     " m, all-zero spectra " + std::to_string(degenerate) + "/" + std::to_string(2 * kPairedTrials);
    });
}

int run(const std::string& cmd)
{
    const int rc = std::system(cmd.c_str());
    return rc;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    if (!is)
        throw std::runtime_error("missing " + p.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

CheckResult determinism(const fs::path& workdir)
{
    return timed("determinism", [&](CheckResult& out) {
        const fs::path dir = workdir / "determinism";
        fs::remove_all(dir);
        fs::create_directories(dir);
        {
            auto cfg = desk_config(32, {3, 3, 3}, {-10.0, 10.0});
            cfg.trials = 20;
            std::ofstream os(dir / "seed_config.json");
            os << nlohmann::json(cfg).dump(2);
        }
        const std::string cli = NFLOC_CLI_PATH;
        const auto quiet = " > " + (dir / "log.txt").string() + " 2>&1";
        if (run(cli + " sweep --config " + (dir / "seed_config.json").string() + " --out " + (dir / "first").string() + quiet) != 0)
            throw std::runtime_error("initial sweep failed");
        const auto manifest = (dir / "first" / "manifest.json").string();
        for (const char* name : {"a", "b"})
            if (run(cli + " sweep --config " + manifest + " --out " + (dir / name).string() + quiet) != 0)
                throw std::runtime_error("replay sweep failed");

        bool same = true;
        std::string sizes;
        for (const char* file : {"rmse.csv", "trials.csv", "manifest.json"}) {
            const auto a = slurp(dir / "a" / file);
            const auto b = slurp(dir / "b" / file);
            const auto first = slurp(dir / "first" / file);
            same = same && a == b && a == first;
            sizes += std::string(sizes.empty() ? "" : ", ") + file + " " + std::to_string(a.size()) + " B";
        }
        out.passed = same;
        out.detail = std::string(same ? "identical" : "DIFFERENT") + " outputs across two replays of the manifest (" +
                     sizes + ")";
    });
}

} // namespace

int main(int argc, char** argv)
{
    fs::path workdir = fs::temp_directory_path() / "nfloc_acceptance";
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--workdir" && i + 1 < argc)
            workdir = argv[++i];
        else if (a == "--only" && i + 1 < argc)
            only = std::atoi(argv[++i]);
        else {
            std::cerr << "usage: acceptance [--workdir DIR] [--only N]\n";
            return 2;
        }
    }

    const std::vector<std::function<CheckResult()>> criteria{
        [] { return with_budget(nfloc::checks::noiseless_on_grid(20, 7), kOnGridBudgetS); },
        snr_trend,
        aperture_trend,
        overhead_trend,
        [] { return nfloc::checks::quantizer_alphabet(100000, 11); },
        [] { return nfloc::checks::lorentzian_circle(10000, 13); },
        [] { return nfloc::checks::combiner_dominance(200, 17); },
        [] { return nfloc::checks::oracle_equivalence(1000, 19); },
        [] { return nfloc::checks::threshold_concentration(10000, 23); },
        [&] { return determinism(workdir); },
    };

    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        if (only != 0 && static_cast<int>(k + 1) != only)
            continue;
        const auto r = criteria[k]();
        std::printf("[%s] %2zu %s: %s (%.1f s)\n", r.passed ? "PASS" : "FAIL", k + 1, r.name.c_str(), r.detail.c_str(),
                    r.seconds);
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
