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

#include "nfloc/geometry_channel.hpp"

#include <algorithm>
#include <cmath>

namespace nfloc {

void ArrayGeometry::validate() const
{
    if (n_rf < 1 || n_e < 1)
        throw std::invalid_argument("ArrayGeometry: n_rf and n_e must be >= 1");
    if (!(d_rf > 0.0) || !(d_e > 0.0))
        throw std::invalid_argument("ArrayGeometry: spacings must be positive");
}

void UePosition::validate() const
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("UePosition: r must be positive and finite");
    if (!(theta >= 0.0 && theta <= kPi / 2))
        throw std::invalid_argument("UePosition: theta must lie in [0, pi/2]");
    if (!(phi >= 0.0 && phi <= kPi))
        throw std::invalid_argument("UePosition: phi must lie in [0, pi]");
}

Cartesian to_cartesian(const UePosition& ue)
{
    const double s = std::sin(ue.theta);
    return {ue.r * s * std::cos(ue.phi), ue.r * s * std::sin(ue.phi), ue.r * std::cos(ue.theta)};
}

double cartesian_distance(const Cartesian& a, const Cartesian& b)
{
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

CarrierConfig CarrierConfig::from_frequency(double frequency_hz, double kappa_abs, double b)
{
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("CarrierConfig: frequency must be positive");
    CarrierConfig c;
    c.wavelength = kSpeedOfLight / frequency_hz;
    c.kappa_abs = kappa_abs;
    c.boresight_exponent = b;
    c.validate();
    return c;
}

void CarrierConfig::validate() const
{
    if (!(wavelength > 0.0))
        throw std::invalid_argument("CarrierConfig: wavelength must be positive");
    if (!(kappa_abs >= 0.0))
        throw std::invalid_argument("CarrierConfig: kappa_abs must be >= 0");
    if (!(boresight_exponent >= 0.0))
        throw std::invalid_argument("CarrierConfig: boresight exponent must be >= 0");
}

double ChannelVector::norm() const
{
    double acc = 0.0;
    for (const auto& g : gains)
        acc += std::norm(g);
    return std::sqrt(acc);
}

namespace {

void check_element(const ArrayGeometry& geom, int i, int n)
{
    if (i < 0 || i >= geom.n_rf || n < 0 || n >= geom.n_e)
        throw std::out_of_range("element index outside the aperture");
}

// Distance and elevation share the offsets; kept together so the channel loop
// evaluates the trigonometry of the UE position once.
struct UeTerms {
    double x, y, z;
};

UeTerms ue_terms(const UePosition& ue)
{
    const double s = std::sin(ue.theta);
    return {ue.r * s * std::cos(ue.phi), ue.r * s * std::sin(ue.phi), ue.r * std::cos(ue.theta)};
}

double distance_from_terms(const UeTerms& t, double ex, double ez)
{
    const double dx = t.x - ex;
    const double dz = t.z - ez;
    const double d = std::sqrt(dx * dx + t.y * t.y + dz * dz);
    if (!(d > 0.0))
        throw DegenerateGeometry("UE coincides with a metamaterial element");
    return d;
}

double elevation_from_terms(const UeTerms& t, double ez, double d)
{
    return std::asin(std::min(1.0, std::abs(ez - t.z) / d));
}

} // namespace

double element_distance(const ArrayGeometry& geom, const UePosition& ue, int i, int n)
{
    check_element(geom, i, n);
    return distance_from_terms(ue_terms(ue), i * geom.d_rf, n * geom.d_e);
}

double element_elevation(const ArrayGeometry& geom, const UePosition& ue, int i, int n)
{
    check_element(geom, i, n);
    const auto t = ue_terms(ue);
    const double d = distance_from_terms(t, i * geom.d_rf, n * geom.d_e);
    return elevation_from_terms(t, n * geom.d_e, d);
}

double radiation_profile(double theta, double b)
{
    if (theta < -kPi / 2 || theta > kPi / 2)
        return 0.0;
    return 2.0 * (b + 1.0) * std::pow(std::cos(theta), b);
}

double attenuation(const ArrayGeometry& geom, const UePosition& ue, const CarrierConfig& carrier, int i, int n)
{
    check_element(geom, i, n);
    const auto t = ue_terms(ue);
    const double d = distance_from_terms(t, i * geom.d_rf, n * geom.d_e);
    const double el = elevation_from_terms(t, n * geom.d_e, d);
    return std::sqrt(radiation_profile(el, carrier.boresight_exponent)) * carrier.wavelength / (4.0 * kPi * d) *
           std::exp(-carrier.kappa_abs * d / 2.0);
}

ChannelVector channel_vector(const ArrayGeometry& geom, const UePosition& ue, const CarrierConfig& carrier)
{
    const auto t = ue_terms(ue);
    const double k0 = 2.0 * kPi / carrier.wavelength;
    const double scale = carrier.wavelength / (4.0 * kPi);

    ChannelVector h;
    h.gains.resize(geom.size());
    for (int i = 0; i < geom.n_rf; ++i) {
        const double ex = i * geom.d_rf;
        for (int n = 0; n < geom.n_e; ++n) {
            const double ez = n * geom.d_e;
            const double d = distance_from_terms(t, ex, ez);
            const double el = elevation_from_terms(t, ez, d);
            const double amp = std::sqrt(radiation_profile(el, carrier.boresight_exponent)) * scale / d *
                               std::exp(-carrier.kappa_abs * d / 2.0);
            h.gains[geom.flat_index(i, n)] = std::polar(amp, k0 * d);
        }
    }
    return h;
}

double aperture_diagonal(const ArrayGeometry& geom)
{
    return std::hypot((geom.n_rf - 1) * geom.d_rf, (geom.n_e - 1) * geom.d_e);
}

FresnelBounds fresnel_bounds(const ArrayGeometry& geom, const CarrierConfig& carrier)
{
    const double D = aperture_diagonal(geom);
    return {0.62 * std::sqrt(D * D * D / carrier.wavelength), 2.0 * D * D / carrier.wavelength};
}

} // namespace nfloc
