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

#include "nfloc/quantized_frontend.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nfloc {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double thermal_noise_mw(double bandwidth_hz)
{
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("bandwidth must be positive");
    return dbm_to_mw(-174.0 + 10.0 * std::log10(bandwidth_hz));
}

PilotConfig PilotConfig::full_power(double power_dbm)
{
    return {power_dbm, cplx(std::sqrt(dbm_to_mw(power_dbm)), 0.0)};
}

std::vector<cplx> draw_noise(std::size_t n, double sigma2, std::uint64_t seed)
{
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("noise variance must be >= 0");
    std::vector<cplx> out(n);
    if (sigma2 == 0.0)
        return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
    for (auto& v : out) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v = {re, im};
    }
    return out;
}

std::vector<cplx> apply_combiner(const CombinerMatrix& combiner, const PropagationMatrix& prop,
                                 std::span<const cplx> x)
{
    const std::size_t n_e = static_cast<std::size_t>(combiner.n_e());
    const std::size_t total = static_cast<std::size_t>(combiner.n_rf()) * n_e;
    if (x.size() != total || prop.diag.size() != total)
        throw std::invalid_argument("apply_combiner: dimension mismatch");

    std::vector<cplx> y(static_cast<std::size_t>(combiner.n_rf()));
    for (int i = 0; i < combiner.n_rf(); ++i) {
        cplx acc{};
        const std::size_t base = static_cast<std::size_t>(i) * n_e;
        for (std::size_t n = 0; n < n_e; ++n) {
            const cplx w = combiner.weight(i, static_cast<int>(n)).value;
            acc += std::conj(w) * std::conj(prop.diag[base + n]) * x[base + n];
        }
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

namespace {

std::vector<cplx> pilot_column(const ChannelVector& h, const PilotConfig& pilot)
{
    std::vector<cplx> x(h.size());
    for (std::size_t k = 0; k < h.size(); ++k)
        x[k] = std::conj(h.gains[k]) * pilot.symbol;
    return x;
}

} // namespace

std::vector<cplx> receive(const ChannelVector& channel, const PropagationMatrix& prop, const CombinerMatrix& combiner,
                          const PilotConfig& pilot, std::span<const cplx> noise)
{
    // Signal and noise go through the combiner separately so the signal term is
    // bit-identical to the DC offset built from the same channel.
    auto y = apply_combiner(combiner, prop, pilot_column(channel, pilot));
    const auto v = apply_combiner(combiner, prop, noise);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += v[i];
    return y;
}

std::vector<cplx> receive(const ChannelVector& channel, const PropagationMatrix& prop, const CombinerMatrix& combiner,
                          const PilotConfig& pilot, const NoiseConfig& noise)
{
    const auto n = draw_noise(channel.size(), noise.sigma2, noise.seed);
    return receive(channel, prop, combiner, pilot, n);
}

double noise_threshold(std::size_t n, double sigma2)
{
    return std::sqrt(static_cast<double>(n) * sigma2);
}

DcOffset dc_offset(const CombinerMatrix& combiner, const PropagationMatrix& prop, const ChannelVector& h_hat,
                   const PilotConfig& pilot, double sigma2)
{
    return {apply_combiner(combiner, prop, pilot_column(h_hat, pilot)), noise_threshold(h_hat.size(), sigma2)};
}

namespace {

double sign_half(double v) { return v >= 0.0 ? 0.5 : -0.5; }

} // namespace

QuantizedSnapshot quantize(std::span<const cplx> y, std::span<const cplx> k, double gamma_q)
{
    if (y.size() != k.size())
        throw std::invalid_argument("quantize: y and k differ in length");
    QuantizedSnapshot snap;
    snap.y.assign(y.begin(), y.end());
    snap.y_q.resize(y.size());
    snap.gate_residuals.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double g = std::abs(y[i] - k[i]);
        snap.gate_residuals[i] = g;
        snap.y_q[i] = g <= gamma_q ? cplx(sign_half(y[i].real()), sign_half(y[i].imag())) : cplx{};
    }
    return snap;
}

double QuantizedSnapshot::score() const
{
    double s = 0.0;
    for (const auto& v : y_q)
        s += std::norm(v);
    return s;
}

double QuantizedSnapshot::residual_sum() const
{
    double s = 0.0;
    for (double g : gate_residuals)
        s += g;
    return s;
}

double QuantizedSnapshot::energy() const
{
    double s = 0.0;
    for (const auto& v : y)
        s += std::norm(v);
    return s;
}

} // namespace nfloc
