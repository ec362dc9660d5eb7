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

#include <cstdint>
#include <span>
#include <vector>

#include "nfloc/dma_hardware.hpp"
#include "nfloc/geometry_channel.hpp"

namespace nfloc {

// Powers are linear milliwatts internally; dBm only at the interface.
[[nodiscard]] double dbm_to_mw(double dbm);
/// Thermal noise variance -174 dBm/Hz + 10 log10(B), in mW.
[[nodiscard]] double thermal_noise_mw(double bandwidth_hz);

struct PilotConfig {
    double power_dbm = 0;
    cplx symbol{1.0, 0.0};

    /// Deterministic full-power pilot s = sqrt(P_max) (real).
    [[nodiscard]] static PilotConfig full_power(double power_dbm);
};

struct NoiseConfig {
    double sigma2 = 1.0; ///< per-element variance, mW
    std::uint64_t seed = 0;
};

/// N i.i.d. CN(0, sigma2) samples from a stream owned by `seed`.
[[nodiscard]] std::vector<cplx> draw_noise(std::size_t n, double sigma2, std::uint64_t seed);

/// W^H P^H x for a length-N element-domain vector x.
[[nodiscard]] std::vector<cplx> apply_combiner(const CombinerMatrix& combiner, const PropagationMatrix& prop,
                                               std::span<const cplx> x);

/// y = W^H P^H h^H s + W^H P^H n, with n drawn from `noise`.
[[nodiscard]] std::vector<cplx> receive(const ChannelVector& channel, const PropagationMatrix& prop,
                                        const CombinerMatrix& combiner, const PilotConfig& pilot,
                                        const NoiseConfig& noise);

/// Same as above with an explicit element-domain noise vector.
[[nodiscard]] std::vector<cplx> receive(const ChannelVector& channel, const PropagationMatrix& prop,
                                        const CombinerMatrix& combiner, const PilotConfig& pilot,
                                        std::span<const cplx> noise);

struct DcOffset {
    std::vector<cplx> k;
    double gamma_q = 0;
};

/// gamma_q = sqrt(N sigma2).
[[nodiscard]] double noise_threshold(std::size_t n, double sigma2);

/// k = W^H P^H h_hat^H s (pilot-scaled replica) and the gating threshold.
[[nodiscard]] DcOffset dc_offset(const CombinerMatrix& combiner, const PropagationMatrix& prop,
                                 const ChannelVector& h_hat, const PilotConfig& pilot, double sigma2);

struct QuantizedSnapshot {
    std::vector<cplx> y;
    std::vector<cplx> y_q;
    std::vector<double> gate_residuals;

    /// ||y_q||^2, always a multiple of 0.5.
    [[nodiscard]] double score() const;
    /// Sum of gate residuals.
    [[nodiscard]] double residual_sum() const;
    /// ||y||^2 before quantization.
    [[nodiscard]] double energy() const;
};

/*!
 * Gated 1-bit quantizer. Entry i passes when |y_i - k_i| <= gamma_q and is
 * then 0.5 (sign(Re y_i) + j sign(Im y_i)) with sign(0) = +1; otherwise 0.
 */
[[nodiscard]] QuantizedSnapshot quantize(std::span<const cplx> y, std::span<const cplx> k, double gamma_q);

} // namespace nfloc
