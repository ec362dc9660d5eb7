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
#include <random>

#include "nfloc/quantized_frontend.hpp"
#include "oracles.hpp"

using namespace nfloc;

namespace {

struct SmallSystem {
    ArrayGeometry geom{2, 3, 0.5, 0.2};
    PropagationMatrix prop;
    CombinerMatrix combiner;
    ChannelVector h;
};

SmallSystem random_system(std::uint64_t seed)
{
    SmallSystem s;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(-kPi / 2, kPi / 2);
    std::normal_distribution<double> g(0.0, 1.0);
    s.prop = propagation_matrix(s.geom, WaveguideConfig::uniform(s.geom, 0.4, 9.0));
    std::vector<LorentzianWeight> ws;
    for (std::size_t k = 0; k < s.geom.size(); ++k) {
        ws.push_back(lorentzian_weight(ph(rng)));
        s.h.gains.emplace_back(g(rng), g(rng));
    }
    s.combiner = assemble_combiner(s.geom, ws);
    return s;
}

double max_abs_diff(const std::vector<cplx>& a, const Eigen::VectorXcd& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b(static_cast<Eigen::Index>(i))));
    return d;
}

} // namespace

TEST_CASE("unit conversions")
{
    CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0));
    CHECK(dbm_to_mw(20.0) == doctest::Approx(100.0));
    CHECK(thermal_noise_mw(1.0) == doctest::Approx(std::pow(10.0, -17.4)));
    CHECK(thermal_noise_mw(150e3) == doctest::Approx(std::pow(10.0, (-174.0 + 10 * std::log10(150e3)) / 10)));
    CHECK(std::abs(PilotConfig::full_power(10.0).symbol - cplx(std::sqrt(10.0), 0.0)) <= 1e-14);
}

TEST_CASE("receive closed forms")
{
    const ArrayGeometry one{1, 1, 1.0, 1.0};
    const auto w = assemble_combiner(one, {lorentzian_weight(kPi / 2)});
    const PropagationMatrix p{{cplx(1.0, 0.0)}};
    const ChannelVector h{{cplx(1.0, 0.0)}};
    const PilotConfig pilot{0.0, cplx(1.0, 0.0)};
    const auto y = receive(h, p, w, pilot, NoiseConfig{0.0, 1});
    REQUIRE(y.size() == 1);
    CHECK(std::abs(y[0] - cplx(0.0, -1.0)) <= 1e-16);

    // silent pilot leaves only processed noise
    const auto s = random_system(2);
    const PilotConfig silent{0.0, cplx{}};
    const auto n = draw_noise(s.geom.size(), 0.3, 77);
    const auto y0 = receive(s.h, s.prop, s.combiner, silent, n);
    const auto wn = apply_combiner(s.combiner, s.prop, n);
    for (std::size_t i = 0; i < y0.size(); ++i)
        CHECK(std::abs(y0[i] - wn[i]) <= 1e-15);
}

TEST_CASE("receive and dc_offset agree with the dense oracle")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = random_system(seed);
        const auto w = oracle::dense_combiner(s.combiner);
        const PilotConfig pilot = PilotConfig::full_power(3.0);
        const auto n = draw_noise(s.geom.size(), 0.5, seed + 100);
        const auto y = receive(s.h, s.prop, s.combiner, pilot, NoiseConfig{0.5, seed + 100});
        CHECK(max_abs_diff(y, oracle::dense_receive(w, s.prop, s.h, pilot.symbol, n)) <= 1e-12);

        const auto k = dc_offset(s.combiner, s.prop, s.h, pilot, 0.5);
        CHECK(max_abs_diff(k.k, oracle::dense_receive(w, s.prop, s.h, pilot.symbol, {})) <= 1e-12);
        CHECK(k.gamma_q == doctest::Approx(std::sqrt(6 * 0.5)));
    }
}

TEST_CASE("noise streams")
{
    const auto a = draw_noise(64, 0.7, 42);
    const auto b = draw_noise(64, 0.7, 42);
    const auto c = draw_noise(64, 0.7, 43);
    CHECK(a == b);
    CHECK(a != c);
    for (const auto& v : draw_noise(8, 0.0, 5))
        CHECK(v == cplx{});

    const auto s = random_system(6);
    const PilotConfig pilot = PilotConfig::full_power(0.0);
    CHECK(receive(s.h, s.prop, s.combiner, pilot, NoiseConfig{0.2, 9}) ==
          receive(s.h, s.prop, s.combiner, pilot, NoiseConfig{0.2, 9}));
}

TEST_CASE("signal scales with pilot amplitude")
{
    const auto s = random_system(3);
    const auto y0 = receive(s.h, s.prop, s.combiner, PilotConfig::full_power(0.0), NoiseConfig{0.0, 0});
    const auto y10 = receive(s.h, s.prop, s.combiner, PilotConfig::full_power(10.0), NoiseConfig{0.0, 0});
    for (std::size_t i = 0; i < y0.size(); ++i)
        CHECK(std::abs(y10[i] - std::sqrt(10.0) * y0[i]) <= 1e-14 * std::abs(y10[i]) + 1e-300);
}

TEST_CASE("noise threshold")
{
    CHECK(noise_threshold(4, 1.0) == doctest::Approx(2.0));
    CHECK(noise_threshold(1, 1.0) == doctest::Approx(1.0));
    CHECK(noise_threshold(256, 0.25) == doctest::Approx(8.0));
}

TEST_CASE("perfect match passes every chain")
{
    const auto s = random_system(12);
    const auto pilot = PilotConfig::full_power(0.0);
    const auto k = dc_offset(s.combiner, s.prop, s.h, pilot, 1e-30);
    const auto y = receive(s.h, s.prop, s.combiner, pilot, NoiseConfig{1e-30, 4});
    const auto q = quantize(y, k.k, k.gamma_q);
    CHECK(q.score() == doctest::Approx(0.5 * s.geom.n_rf));
    for (const auto g : q.gate_residuals)
        CHECK(g <= k.gamma_q);
}

TEST_CASE("gated quantizer")
{
    const std::vector<cplx> a{{0.3, 0.2}};
    CHECK(quantize(a, a, 1.0).y_q[0] == cplx(0.5, 0.5));

    const std::vector<cplx> b{{-2.0, -3.0}};
    CHECK(quantize(b, b, 0.1).y_q[0] == cplx(-0.5, -0.5));

    const std::vector<cplx> y{{1.0, 1.0}}, k{{3.0, 1.0}};
    const auto far = quantize(y, k, 1.5);
    CHECK(far.y_q[0] == cplx{});
    CHECK(far.gate_residuals[0] == doctest::Approx(2.0));
    CHECK(far.score() == 0.0);

    // sign(0) = +1, and the gate boundary itself passes
    const std::vector<cplx> z{{0.0, -0.0}};
    CHECK(quantize(z, z, 0.0).y_q[0] == cplx(0.5, 0.5));
    CHECK(quantize(y, k, 2.0).y_q[0] == cplx(0.5, 0.5));

    const std::vector<cplx> yy{{1.0, -1.0}, {-4.0, 2.0}, {0.1, 0.1}};
    const std::vector<cplx> kk{{1.0, -1.0}, {0.0, 0.0}, {0.0, 0.0}};
    const auto q = quantize(yy, kk, 1.0);
    CHECK(q.score() == 1.0);
    CHECK(q.energy() == doctest::Approx(2.0 + 20.0 + 0.02));
    CHECK(q.residual_sum() == doctest::Approx(std::sqrt(20.0) + std::sqrt(0.02)));

    CHECK_THROWS((void)quantize(yy, std::vector<cplx>(2), 1.0));
}
