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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfloc {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

/// Raised when the user antenna coincides with a metamaterial element.
class DegenerateGeometry : public std::domain_error {
public:
    explicit DegenerateGeometry(const std::string& what) : std::domain_error(what) {}
};

/*!
 * Planar DMA aperture in the xz-plane.
 *
 * Microstrip `i` (0-based) runs along +z at x = i * d_rf; element `n` of a
 * microstrip sits at z = n * d_e. Element (0, 0) is the origin. Elements are
 * stored strip-major: flat index = i * n_e + n.
 */
struct ArrayGeometry {
    int n_rf = 1;    ///< microstrips / RF chains
    int n_e = 1;     ///< elements per microstrip
    double d_rf = 0; ///< inter-microstrip spacing [m]
    double d_e = 0;  ///< intra-microstrip spacing [m]

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(n_rf) * static_cast<std::size_t>(n_e); }
    [[nodiscard]] std::size_t flat_index(int i, int n) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_e) + static_cast<std::size_t>(n);
    }
    void validate() const;
};

/// Spherical coordinates of the user antenna; theta from +z, phi from +x.
struct UePosition {
    double r = 1;
    double theta = 0;
    double phi = 0;

    void validate() const;
};

struct Cartesian {
    double x = 0, y = 0, z = 0;
};

[[nodiscard]] Cartesian to_cartesian(const UePosition& ue);
[[nodiscard]] double cartesian_distance(const Cartesian& a, const Cartesian& b);

struct CarrierConfig {
    double wavelength = kSpeedOfLight / 140e9; ///< [m]
    double kappa_abs = 0.0075;                 ///< molecular absorption [1/m]
    double boresight_exponent = 2.0;           ///< b in the element pattern

    [[nodiscard]] static CarrierConfig from_frequency(double frequency_hz, double kappa_abs = 0.0075, double b = 2.0);
    void validate() const;
};

/// Near-field uplink channel, one complex gain per element in flat order.
struct ChannelVector {
    std::vector<cplx> gains;

    [[nodiscard]] std::size_t size() const { return gains.size(); }
    [[nodiscard]] double norm() const;
};

// Element indices below are 0-based: i in [0, n_rf), n in [0, n_e).

/// Distance from the UE to element (i, n). Throws DegenerateGeometry at zero.
[[nodiscard]] double element_distance(const ArrayGeometry& geom, const UePosition& ue, int i, int n);

/// Elevation of the UE seen from element (i, n): asin(|z_n - r cos(theta)| / r_in), in [0, pi/2].
[[nodiscard]] double element_elevation(const ArrayGeometry& geom, const UePosition& ue, int i, int n);

/// Element radiation profile 2(b+1) cos^b(theta) on [-pi/2, pi/2], zero elsewhere.
[[nodiscard]] double radiation_profile(double theta, double b);

/// Real amplitude sqrt(F(theta_in)) * lambda / (4 pi r_in) * exp(-kappa r_in / 2).
[[nodiscard]] double attenuation(const ArrayGeometry& geom, const UePosition& ue, const CarrierConfig& carrier, int i,
                                 int n);

/// Spherical-wavefront channel: gain_k = attenuation * exp(j 2 pi r_in / lambda).
[[nodiscard]] ChannelVector channel_vector(const ArrayGeometry& geom, const UePosition& ue,
                                           const CarrierConfig& carrier);

struct FresnelBounds {
    double near = 0; ///< 0.62 sqrt(D^3 / lambda)
    double far = 0;  ///< 2 D^2 / lambda
};

/// Length of the aperture diagonal D.
[[nodiscard]] double aperture_diagonal(const ArrayGeometry& geom);
[[nodiscard]] FresnelBounds fresnel_bounds(const ArrayGeometry& geom, const CarrierConfig& carrier);

} // namespace nfloc
