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

#include <cstddef>
#include <vector>

#include "nfloc/geometry_channel.hpp"

namespace nfloc {

/// Wrap an angle into (-pi, pi].
[[nodiscard]] double wrap_phase(double phi);

/*!
 * Signal propagation inside the microstrips.
 *
 * alpha/beta hold one value per microstrip; element_positions holds rho_n,
 * the distance of element n from the feed, shared by all microstrips.
 */
struct WaveguideConfig {
    std::vector<double> alpha;             ///< attenuation [1/m], >= 0
    std::vector<double> beta;              ///< wavenumber [rad/m], > 0
    std::vector<double> element_positions; ///< rho_n [m]; rho_0 = 0, strictly increasing

    /// Same alpha/beta on every strip, rho_n = n * d_e.
    [[nodiscard]] static WaveguideConfig uniform(const ArrayGeometry& geom, double alpha, double beta);
    void validate(const ArrayGeometry& geom) const;
};

/// Diagonal of the N x N waveguide propagation matrix.
struct PropagationMatrix {
    std::vector<cplx> diag;
};

/// Entry (i, n) = exp(-rho_n (alpha_i + j beta_i)).
[[nodiscard]] PropagationMatrix propagation_matrix(const ArrayGeometry& geom, const WaveguideConfig& waveguide);

/// A metamaterial response on the Lorentzian circle |w - j/2| = 1/2.
struct LorentzianWeight {
    double phase = 0; ///< in [-pi/2, pi/2]
    cplx value{0.5, 0.5};
};

/// (j + e^{j phi}) / 2. Throws std::out_of_range outside [-pi/2, pi/2].
[[nodiscard]] LorentzianWeight lorentzian_weight(double phi);

struct MappedWeight {
    LorentzianWeight weight;
    bool clamped = false; ///< composite phase left [-pi/2, pi/2] and was clamped
};

/*!
 * Compensated weight 0.5 (j + w_tilde e^{j rho beta}).
 *
 * The composite phase arg(w_tilde) + rho*beta is wrapped into (-pi, pi] and,
 * if it falls outside [-pi/2, pi/2], replaced by the nearest endpoint so the
 * result stays in the Lorentzian set. Throws std::invalid_argument when
 * |w_tilde| differs from 1 by more than 1e-9.
 */
[[nodiscard]] MappedWeight map_to_lorentzian(cplx w_tilde, double rho, double beta);

/// Dense column-major complex matrix; only used for export and checks.
struct DenseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<cplx> data;

    [[nodiscard]] cplx operator()(std::size_t r, std::size_t c) const { return data[c * rows + r]; }
};

/*!
 * Block-sparse analog combiner. Only the n_rf x n_e diagonal blocks are stored;
 * the dense N x N_RF form has entry (i*n_e + n, j) = w_{i,n} for i == j and 0
 * otherwise.
 */
class CombinerMatrix {
public:
    CombinerMatrix() = default;
    CombinerMatrix(int n_rf, int n_e, std::vector<LorentzianWeight> weights, std::size_t clamped = 0);

    [[nodiscard]] int n_rf() const { return n_rf_; }
    [[nodiscard]] int n_e() const { return n_e_; }
    [[nodiscard]] const LorentzianWeight& weight(int i, int n) const
    {
        return weights_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_e_) + static_cast<std::size_t>(n)];
    }
    [[nodiscard]] const std::vector<LorentzianWeight>& weights() const { return weights_; }
    /// Number of weights whose composite phase had to be clamped.
    [[nodiscard]] std::size_t clamped_count() const { return clamped_; }

    [[nodiscard]] DenseMatrix dense() const;

private:
    int n_rf_ = 0;
    int n_e_ = 0;
    std::vector<LorentzianWeight> weights_;
    std::size_t clamped_ = 0;
};

[[nodiscard]] CombinerMatrix assemble_combiner(const ArrayGeometry& geom, std::vector<LorentzianWeight> weights);

} // namespace nfloc
