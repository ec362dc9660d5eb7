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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "nfloc/combiner_search.hpp"
#include "nfloc/dma_hardware.hpp"
#include "nfloc/geometry_channel.hpp"
#include "nfloc/quantized_frontend.hpp"

namespace nfloc {

/// Closed interval of admissible values for one grid axis.
struct AxisRange {
    double lo = 0;
    double hi = 0;
};

/*!
 * Confidence-interval grid around a prior position.
 *
 * Each axis covers [prior - half_width, prior + half_width] intersected with
 * its valid range. Counts of 1 keep the (clipped) prior value.
 */
struct GridSpec {
    double d_r = 5.0;                       ///< [m]
    double d_theta = 10.0 * kPi / 180.0;    ///< [rad]
    double d_phi = 0.0;                     ///< [rad]
    std::array<int, 3> counts{5, 5, 1};     ///< r, theta, phi
    AxisRange valid_r{1.0, 20.0};
    AxisRange valid_theta{0.0, kPi / 2};
    AxisRange valid_phi{0.0, kPi};
};

struct SearchGrid {
    std::vector<UePosition> candidates; ///< r-major, then theta, then phi
    std::array<int, 3> counts{1, 1, 1};
    std::array<AxisRange, 3> bounds{};

    [[nodiscard]] std::size_t size() const { return candidates.size(); }
};

/// Throws std::invalid_argument when an interval misses its valid range.
[[nodiscard]] SearchGrid build_grid(const UePosition& prior, const GridSpec& spec);

/// Read-only system description shared by every probe.
struct SystemModel {
    ArrayGeometry geometry;
    CarrierConfig carrier;
    WaveguideConfig waveguide;
    PropagationMatrix propagation;
    PhaseCodebook codebook{10};
    PilotConfig pilot;
    double sigma2 = 1.0;

    [[nodiscard]] static SystemModel make(const ArrayGeometry& geometry, const CarrierConfig& carrier,
                                          const WaveguideConfig& waveguide, int codebook_bits,
                                          const PilotConfig& pilot, double sigma2);
};

/// One TTI: focus on a candidate, receive with the true channel, quantize.
struct ProbeResult {
    double score = 0;     ///< ||y_q||^2
    double residual = 0;  ///< sum of gate residuals
    double energy = 0;    ///< ||y||^2, used by the full-resolution baseline
    std::size_t clamped = 0;
};

[[nodiscard]] ProbeResult probe_candidate(const SystemModel& model, const ChannelVector& truth,
                                          const UePosition& candidate, std::uint64_t noise_seed);

/// Noise seed of candidate p within one spectrum.
[[nodiscard]] std::uint64_t candidate_seed(std::uint64_t spectrum_seed, std::size_t index);

struct PseudoSpectrum {
    std::vector<double> scores;
    std::vector<double> residual_scores;
    std::vector<double> energies;
    std::size_t clamped_weights = 0;

    [[nodiscard]] std::size_t size() const { return scores.size(); }
};

/// Candidates probed concurrently (OpenMP); bit-identical to the serial path.
[[nodiscard]] PseudoSpectrum pseudo_spectrum(const SearchGrid& grid, const ChannelVector& truth,
                                             const SystemModel& model, std::uint64_t spectrum_seed);

/// Reference implementation: one candidate after the other.
[[nodiscard]] PseudoSpectrum pseudo_spectrum_serial(const SearchGrid& grid, const ChannelVector& truth,
                                                    const SystemModel& model, std::uint64_t spectrum_seed);

struct PositionEstimate {
    UePosition position;
    std::size_t index = 0;
    double peak_score = 0;
    int tie_count = 1;
    bool degenerate = false; ///< every candidate scored zero
};

/// Peak of the primary score; ties go to the smaller residual, then the lower index.
[[nodiscard]] PositionEstimate estimate_position(const PseudoSpectrum& spectrum, const SearchGrid& grid);

/// Peak of the unquantized energy, lowest index on ties.
[[nodiscard]] PositionEstimate estimate_by_energy(const PseudoSpectrum& spectrum, const SearchGrid& grid);

/// index,r_m,theta_rad,phi_rad,score,residual,energy
void write_spectrum_csv(std::ostream& os, const SearchGrid& grid, const PseudoSpectrum& spectrum);

} // namespace nfloc
