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
#include <span>
#include <vector>

#include "nfloc/dma_hardware.hpp"
#include "nfloc/geometry_channel.hpp"

namespace nfloc {

/// 2^bits phases evenly spaced over [-pi/2, pi/2], endpoints included.
class PhaseCodebook {
public:
    explicit PhaseCodebook(int bits = 10);

    [[nodiscard]] int bits() const { return bits_; }
    [[nodiscard]] std::size_t size() const { return phases_.size(); }
    [[nodiscard]] double step() const { return step_; }
    [[nodiscard]] double phase(std::size_t idx) const { return phases_[idx]; }
    [[nodiscard]] cplx unit(std::size_t idx) const { return units_[idx]; }
    [[nodiscard]] const std::vector<double>& phases() const { return phases_; }

    /// Index of the codebook phase nearest to phi after wrapping into (-pi, pi]
    /// and clamping to [-pi/2, pi/2]; ties go to the smaller phase.
    [[nodiscard]] std::size_t nearest_index(double phi) const;

private:
    int bits_;
    double step_;
    std::vector<double> phases_;
    std::vector<cplx> units_;
};

[[nodiscard]] double quantize_phase(double phi, const PhaseCodebook& codebook);

struct CombinerSolution {
    int n_rf = 0;
    int n_e = 0;
    std::vector<std::size_t> codeword; ///< codebook index per element, flat order
    std::vector<cplx> w_tilde;         ///< unit-modulus weights, flat order
    std::vector<double> offsets;       ///< winning common phase offset per microstrip
    double objective = 0;              ///< sum_i |sum_n conj(w_tilde) c|^2
};

/*!
 * Effective channel seen by the unit-modulus combiner: c = |P| h_hat^H.
 *
 * The waveguide phase is left out because finalize_weights() compensates it
 * with e^{j rho beta}; only the waveguide loss weights the elements.
 */
[[nodiscard]] std::vector<cplx> effective_channel(const ChannelVector& h_hat, const PropagationMatrix& prop);

/// sum over microstrips of |sum_n conj(w_tilde_n) c_n|^2.
[[nodiscard]] double op_objective(std::span<const cplx> w_tilde, std::span<const cplx> c, const ArrayGeometry& geom);

struct StripSolution {
    std::vector<std::size_t> codeword;
    double offset = 0;
    double objective = 0;
};

/*!
 * Best assignment quantize(arg c_n + psi) over all psi in [-pi, pi) for one
 * microstrip.
 *
 * The assignment is piecewise constant in psi and only changes when some
 * element crosses a codebook decision boundary. All boundaries sit on a
 * lattice of spacing step() (including the one at pi between the two
 * endpoints), so sorting the elements by their offset to the next lattice
 * point once lets the sweep visit every distinct assignment in psi order with
 * O(1) work per crossing. The first (smallest psi) assignment with the
 * largest objective wins.
 */
[[nodiscard]] StripSolution solve_strip(std::span<const cplx> c, const PhaseCodebook& codebook);

/// Maximizes the unit-modulus combining gain for a candidate channel. Throws
/// std::invalid_argument for a zero channel.
[[nodiscard]] CombinerSolution solve_op(const ChannelVector& h_hat, const PropagationMatrix& prop,
                                        const ArrayGeometry& geom, const PhaseCodebook& codebook);

/// Lorentzian weights 0.5 (j + w_tilde e^{j rho beta}) for a solved combiner.
[[nodiscard]] CombinerMatrix finalize_weights(const CombinerSolution& solution, const WaveguideConfig& waveguide);

} // namespace nfloc
