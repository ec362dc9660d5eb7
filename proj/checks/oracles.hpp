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

// Reference computations used to check nfloc_core. Each one takes a
// different route from the production code (Cartesian coordinates, dense
// Eigen products, exhaustive enumeration) and none is used by the simulator.

#include <cstdint>

#include <Eigen/Dense>

#include "nfloc/combiner_search.hpp"
#include "nfloc/dma_hardware.hpp"
#include "nfloc/geometry_channel.hpp"
#include "nfloc/localizer.hpp"

namespace nfloc::oracle {

/// Euclidean distance between element (i, n) placed at (i d_rf, 0, n d_e) and the UE.
double element_distance(const ArrayGeometry& geom, const UePosition& ue, int i, int n);

/// asin(|z offset| / Cartesian distance).
double element_elevation(const ArrayGeometry& geom, const UePosition& ue, int i, int n);

/// Channel assembled entry by entry from the scalar element_distance and attenuation operations.
ChannelVector compose_channel(const ArrayGeometry& geom, const UePosition& ue, const CarrierConfig& carrier);

/// Dense N x N_RF combiner from the block indicator rule.
Eigen::MatrixXcd dense_combiner(const CombinerMatrix& combiner);

/// W^H P^H (h^H s + n) with dense matrices.
Eigen::VectorXcd dense_receive(const Eigen::MatrixXcd& w, const PropagationMatrix& prop, const ChannelVector& h,
                               cplx s, const std::vector<cplx>& noise);

/// Codebook index minimizing |clamp(wrap(phi)) - phase| by enumeration; ties to the smaller phase.
std::size_t nearest_phase_index(double phi, const PhaseCodebook& codebook);

/// Largest sum_i |sum_n conj(w_n) c_n|^2 over every joint codebook assignment.
double exhaustive_op_optimum(const std::vector<cplx>& c, const ArrayGeometry& geom, const PhaseCodebook& codebook);

/// Step-by-step replay of one pseudo-spectrum with dense algebra. Combiners come
/// from the production solver; channels, received signals, offsets and gating
/// are recomputed here.
PseudoSpectrum replay_spectrum(const SearchGrid& grid, const UePosition& truth, const SystemModel& model,
                               std::uint64_t spectrum_seed);

} // namespace nfloc::oracle
