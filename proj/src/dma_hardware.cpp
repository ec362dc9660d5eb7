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

#include "nfloc/dma_hardware.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace nfloc {

double wrap_phase(double phi)
{
    double w = std::remainder(phi, 2.0 * kPi); // [-pi, pi]
    if (w <= -kPi)
        w += 2.0 * kPi;
    return w;
}

WaveguideConfig WaveguideConfig::uniform(const ArrayGeometry& geom, double alpha, double beta)
{
    WaveguideConfig wg;
    wg.alpha.assign(static_cast<std::size_t>(geom.n_rf), alpha);
    wg.beta.assign(static_cast<std::size_t>(geom.n_rf), beta);
    wg.element_positions.resize(static_cast<std::size_t>(geom.n_e));
    for (int n = 0; n < geom.n_e; ++n)
        wg.element_positions[static_cast<std::size_t>(n)] = n * geom.d_e;
    wg.validate(geom);
    return wg;
}

void WaveguideConfig::validate(const ArrayGeometry& geom) const
{
    if (alpha.size() != static_cast<std::size_t>(geom.n_rf) || beta.size() != static_cast<std::size_t>(geom.n_rf) ||
        element_positions.size() != static_cast<std::size_t>(geom.n_e))
        throw std::invalid_argument("WaveguideConfig: dimension mismatch with geometry");
    for (double a : alpha)
        if (!(a >= 0.0))
            throw std::invalid_argument("WaveguideConfig: alpha must be >= 0");
    for (double b : beta)
        if (!(b > 0.0))
            throw std::invalid_argument("WaveguideConfig: beta must be > 0");
    if (element_positions.front() != 0.0)
        throw std::invalid_argument("WaveguideConfig: rho_0 must be 0");
    for (std::size_t n = 1; n < element_positions.size(); ++n)
        if (!(element_positions[n] > element_positions[n - 1]))
            throw std::invalid_argument("WaveguideConfig: element positions must be strictly increasing");
}

PropagationMatrix propagation_matrix(const ArrayGeometry& geom, const WaveguideConfig& waveguide)
{
    waveguide.validate(geom);
    PropagationMatrix p;
    p.diag.resize(geom.size());
    for (int i = 0; i < geom.n_rf; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        for (int n = 0; n < geom.n_e; ++n) {
            const double rho = waveguide.element_positions[static_cast<std::size_t>(n)];
            p.diag[geom.flat_index(i, n)] = std::exp(-rho * cplx(waveguide.alpha[ii], waveguide.beta[ii]));
        }
    }
    return p;
}

LorentzianWeight lorentzian_weight(double phi)
{
    if (!(phi >= -kPi / 2 && phi <= kPi / 2))
        throw std::out_of_range("Lorentzian phase must lie in [-pi/2, pi/2]");
    return {phi, 0.5 * cplx(std::cos(phi), 1.0 + std::sin(phi))};
}

MappedWeight map_to_lorentzian(cplx w_tilde, double rho, double beta)
{
    if (std::abs(std::abs(w_tilde) - 1.0) > 1e-9)
        throw std::invalid_argument("map_to_lorentzian: w_tilde must have unit modulus");
    double phase = wrap_phase(std::arg(w_tilde) + rho * beta);
    bool clamped = false;
    if (phase > kPi / 2) {
        phase = kPi / 2;
        clamped = true;
    } else if (phase < -kPi / 2) {
        phase = -kPi / 2;
        clamped = true;
    }
    return {lorentzian_weight(phase), clamped};
}

CombinerMatrix::CombinerMatrix(int n_rf, int n_e, std::vector<LorentzianWeight> weights, std::size_t clamped)
    : n_rf_(n_rf), n_e_(n_e), weights_(std::move(weights)), clamped_(clamped)
{
    if (weights_.size() != static_cast<std::size_t>(n_rf) * static_cast<std::size_t>(n_e))
        throw std::invalid_argument("CombinerMatrix: weight table does not match n_rf x n_e");
}

DenseMatrix CombinerMatrix::dense() const
{
    DenseMatrix m;
    m.rows = weights_.size();
    m.cols = static_cast<std::size_t>(n_rf_);
    m.data.assign(m.rows * m.cols, cplx{});
    for (int i = 0; i < n_rf_; ++i)
        for (int n = 0; n < n_e_; ++n) {
            const std::size_t row = static_cast<std::size_t>(i) * static_cast<std::size_t>(n_e_) + static_cast<std::size_t>(n);
            m.data[static_cast<std::size_t>(i) * m.rows + row] = weight(i, n).value;
        }
    return m;
}

CombinerMatrix assemble_combiner(const ArrayGeometry& geom, std::vector<LorentzianWeight> weights)
{
    if (weights.size() != geom.size())
        throw std::invalid_argument("assemble_combiner: weight count does not match geometry");
    return CombinerMatrix(geom.n_rf, geom.n_e, std::move(weights));
}

} // namespace nfloc
