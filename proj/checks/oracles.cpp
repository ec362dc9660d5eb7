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

#include "oracles.hpp"

#include <cmath>
#include <limits>

#include "nfloc/quantized_frontend.hpp"

namespace nfloc::oracle {

namespace {

struct Point {
    double x, y, z;
};

Point ue_point(const UePosition& ue)
{
    return {ue.r * std::sin(ue.theta) * std::cos(ue.phi), ue.r * std::sin(ue.theta) * std::sin(ue.phi),
            ue.r * std::cos(ue.theta)};
}

Point element_point(const ArrayGeometry& geom, int i, int n) { return {i * geom.d_rf, 0.0, n * geom.d_e}; }

} // namespace

double element_distance(const ArrayGeometry& geom, const UePosition& ue, int i, int n)
{
    const auto u = ue_point(ue);
    const auto e = element_point(geom, i, n);
    return std::hypot(u.x - e.x, u.y - e.y, u.z - e.z);
}

double element_elevation(const ArrayGeometry& geom, const UePosition& ue, int i, int n)
{
    const auto u = ue_point(ue);
    const auto e = element_point(geom, i, n);
    return std::asin(std::min(1.0, std::abs(u.z - e.z) / oracle::element_distance(geom, ue, i, n)));
}

ChannelVector compose_channel(const ArrayGeometry& geom, const UePosition& ue, const CarrierConfig& carrier)
{
    ChannelVector h;
    h.gains.resize(geom.size());
    // Phase is ~1e5 rad at 20 m; any regrouping of 2 pi d / lambda moves it by ~1e-11.
    const double k0 = 2.0 * kPi / carrier.wavelength;
    for (int i = 0; i < geom.n_rf; ++i)
        for (int n = 0; n < geom.n_e; ++n) {
            const double d = nfloc::element_distance(geom, ue, i, n);
            const double a = nfloc::attenuation(geom, ue, carrier, i, n);
            h.gains[static_cast<std::size_t>(i * geom.n_e + n)] =
                a * cplx(std::cos(k0 * d), std::sin(k0 * d));
        }
    return h;
}

Eigen::MatrixXcd dense_combiner(const CombinerMatrix& combiner)
{
    const int n_e = combiner.n_e();
    const int rows = combiner.n_rf() * n_e;
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(rows, combiner.n_rf());
    for (int row = 0; row < rows; ++row)
        for (int col = 0; col < combiner.n_rf(); ++col)
            if (row / n_e == col)
                w(row, col) = combiner.weight(col, row % n_e).value;
    return w;
}

Eigen::VectorXcd dense_receive(const Eigen::MatrixXcd& w, const PropagationMatrix& prop, const ChannelVector& h,
                               cplx s, const std::vector<cplx>& noise)
{
    const auto n = static_cast<Eigen::Index>(h.size());
    Eigen::VectorXcd p(n), hv(n), nv(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        p(k) = prop.diag[static_cast<std::size_t>(k)];
        hv(k) = h.gains[static_cast<std::size_t>(k)];
        nv(k) = noise.empty() ? cplx{} : noise[static_cast<std::size_t>(k)];
    }
    const Eigen::MatrixXcd pm = p.asDiagonal();
    // h is a row vector, so h^H is the conjugated column.
    return w.adjoint() * pm.adjoint() * (hv.conjugate() * s + nv);
}

std::size_t nearest_phase_index(double phi, const PhaseCodebook& codebook)
{
    double p = std::atan2(std::sin(phi), std::cos(phi));
    if (p == -kPi)
        p = kPi;
    p = std::min(std::max(p, -kPi / 2), kPi / 2);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < codebook.size(); ++k) {
        const double d = std::abs(p - codebook.phase(k));
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

double exhaustive_op_optimum(const std::vector<cplx>& c, const ArrayGeometry& geom, const PhaseCodebook& codebook)
{
    const std::size_t n = c.size();
    const std::size_t k = codebook.size();
    std::vector<std::size_t> digits(n, 0);
    double best = 0.0;
    while (true) {
        double total = 0.0;
        for (int i = 0; i < geom.n_rf; ++i) {
            cplx acc{};
            for (int e = 0; e < geom.n_e; ++e) {
                const auto idx = static_cast<std::size_t>(i * geom.n_e + e);
                acc += std::exp(cplx(0.0, -codebook.phase(digits[idx]))) * c[idx];
            }
            total += std::norm(acc);
        }
        best = std::max(best, total);

        std::size_t pos = 0;
        while (pos < n && ++digits[pos] == k)
            digits[pos++] = 0;
        if (pos == n)
            break;
    }
    return best;
}

PseudoSpectrum replay_spectrum(const SearchGrid& grid, const UePosition& truth, const SystemModel& model,
                               std::uint64_t spectrum_seed)
{
    const auto h = compose_channel(model.geometry, truth, model.carrier);
    const double gamma = std::sqrt(static_cast<double>(model.geometry.size()) * model.sigma2);

    PseudoSpectrum out;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const auto h_hat_impl = channel_vector(model.geometry, grid.candidates[p], model.carrier);
        const auto combiner =
            finalize_weights(solve_op(h_hat_impl, model.propagation, model.geometry, model.codebook), model.waveguide);
        const auto w = dense_combiner(combiner);

        const auto h_hat = compose_channel(model.geometry, grid.candidates[p], model.carrier);
        const auto noise = draw_noise(model.geometry.size(), model.sigma2, candidate_seed(spectrum_seed, p));
        const Eigen::VectorXcd y = dense_receive(w, model.propagation, h, model.pilot.symbol, noise);
        const Eigen::VectorXcd k = dense_receive(w, model.propagation, h_hat, model.pilot.symbol, {});

        double score = 0.0, residual = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double g = std::abs(y(i) - k(i));
            residual += g;
            if (g <= gamma)
                score += 0.5; // |0.5(+-1 +-j)|^2
        }
        out.scores.push_back(score);
        out.residual_scores.push_back(residual);
        out.energies.push_back(y.squaredNorm());
    }
    return out;
}

} // namespace nfloc::oracle
