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

#include "nfloc/localizer.hpp"

#include <algorithm>
#include <exception>
#include <ostream>
#include <stdexcept>

#include "nfloc/format.hpp"
#include "nfloc/seeding.hpp"

namespace nfloc {

namespace {

std::vector<double> axis_values(double center, double half_width, int count, AxisRange valid, AxisRange& bounds)
{
    if (count < 1)
        throw std::invalid_argument("build_grid: axis counts must be >= 1");
    if (!(half_width >= 0.0))
        throw std::invalid_argument("build_grid: interval half-width must be >= 0");
    const double lo = std::max(center - half_width, valid.lo);
    const double hi = std::min(center + half_width, valid.hi);
    if (lo > hi)
        throw std::invalid_argument("build_grid: confidence interval does not intersect the valid range");
    bounds = {lo, hi};
    if (count == 1)
        return {std::clamp(center, lo, hi)};

    // An unclipped interval is laid out around the center so that an odd
    // count reproduces the center value exactly.
    const bool unclipped = lo == center - half_width && hi == center + half_width;
    const double step = (hi - lo) / (count - 1);
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double x = unclipped ? center + (k - (count - 1) / 2.0) * step : lo + k * step;
        v[static_cast<std::size_t>(k)] = std::clamp(x, lo, hi);
    }
    return v;
}

} // namespace

SearchGrid build_grid(const UePosition& prior, const GridSpec& spec)
{
    SearchGrid grid;
    grid.counts = spec.counts;
    const auto rs = axis_values(prior.r, spec.d_r, spec.counts[0], spec.valid_r, grid.bounds[0]);
    const auto ts = axis_values(prior.theta, spec.d_theta, spec.counts[1], spec.valid_theta, grid.bounds[1]);
    const auto ps = axis_values(prior.phi, spec.d_phi, spec.counts[2], spec.valid_phi, grid.bounds[2]);
    grid.candidates.reserve(rs.size() * ts.size() * ps.size());
    for (double r : rs)
        for (double t : ts)
            for (double p : ps)
                grid.candidates.push_back({r, t, p});
    return grid;
}

SystemModel SystemModel::make(const ArrayGeometry& geometry, const CarrierConfig& carrier,
                              const WaveguideConfig& waveguide, int codebook_bits, const PilotConfig& pilot,
                              double sigma2)
{
    geometry.validate();
    carrier.validate();
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("SystemModel: sigma2 must be >= 0");
    return {geometry, carrier, waveguide, propagation_matrix(geometry, waveguide), PhaseCodebook(codebook_bits),
            pilot, sigma2};
}

std::uint64_t candidate_seed(std::uint64_t spectrum_seed, std::size_t index)
{
    return derive_seed(spectrum_seed, static_cast<std::uint64_t>(index));
}

ProbeResult probe_candidate(const SystemModel& model, const ChannelVector& truth, const UePosition& candidate,
                            std::uint64_t noise_seed)
{
    const auto h_hat = channel_vector(model.geometry, candidate, model.carrier);
    const auto solution = solve_op(h_hat, model.propagation, model.geometry, model.codebook);
    const auto combiner = finalize_weights(solution, model.waveguide);
    const auto dc = dc_offset(combiner, model.propagation, h_hat, model.pilot, model.sigma2);
    const auto noise = draw_noise(model.geometry.size(), model.sigma2, noise_seed);
    const auto y = receive(truth, model.propagation, combiner, model.pilot, noise);
    const auto snap = quantize(y, dc.k, dc.gamma_q);
    return {snap.score(), snap.residual_sum(), snap.energy(), combiner.clamped_count()};
}

namespace {

PseudoSpectrum empty_spectrum(std::size_t n)
{
    PseudoSpectrum s;
    s.scores.resize(n);
    s.residual_scores.resize(n);
    s.energies.resize(n);
    return s;
}

void store(PseudoSpectrum& s, std::size_t p, const ProbeResult& r)
{
    s.scores[p] = r.score;
    s.residual_scores[p] = r.residual;
    s.energies[p] = r.energy;
}

} // namespace

PseudoSpectrum pseudo_spectrum(const SearchGrid& grid, const ChannelVector& truth, const SystemModel& model,
                               std::uint64_t spectrum_seed)
{
    const std::size_t n = grid.size();
    auto out = empty_spectrum(n);
    std::vector<std::size_t> clamped(n, 0);
    std::exception_ptr error;
    const auto count = static_cast<long>(n);

#pragma omp parallel for schedule(dynamic)
    for (long p = 0; p < count; ++p) {
        const auto idx = static_cast<std::size_t>(p);
        try {
            const auto r = probe_candidate(model, truth, grid.candidates[idx], candidate_seed(spectrum_seed, idx));
            store(out, idx, r);
            clamped[idx] = r.clamped;
        } catch (...) {
#pragma omp critical(nfloc_spectrum_error)
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
    for (auto c : clamped)
        out.clamped_weights += c;
    return out;
}

PseudoSpectrum pseudo_spectrum_serial(const SearchGrid& grid, const ChannelVector& truth, const SystemModel& model,
                                      std::uint64_t spectrum_seed)
{
    auto out = empty_spectrum(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const auto r = probe_candidate(model, truth, grid.candidates[p], candidate_seed(spectrum_seed, p));
        store(out, p, r);
        out.clamped_weights += r.clamped;
    }
    return out;
}

PositionEstimate estimate_position(const PseudoSpectrum& spectrum, const SearchGrid& grid)
{
    if (spectrum.size() == 0 || spectrum.size() != grid.size())
        throw std::invalid_argument("estimate_position: spectrum does not match grid");

    PositionEstimate est;
    const double peak = *std::max_element(spectrum.scores.begin(), spectrum.scores.end());
    est.peak_score = peak;
    est.tie_count = static_cast<int>(std::count(spectrum.scores.begin(), spectrum.scores.end(), peak));

    if (peak == 0.0) {
        est.degenerate = true;
        est.index = 0;
    } else {
        std::size_t best = spectrum.size();
        for (std::size_t p = 0; p < spectrum.size(); ++p) {
            if (spectrum.scores[p] != peak)
                continue;
            if (best == spectrum.size() || spectrum.residual_scores[p] < spectrum.residual_scores[best])
                best = p;
        }
        est.index = best;
    }
    est.position = grid.candidates[est.index];
    return est;
}

PositionEstimate estimate_by_energy(const PseudoSpectrum& spectrum, const SearchGrid& grid)
{
    if (spectrum.size() == 0 || spectrum.size() != grid.size())
        throw std::invalid_argument("estimate_by_energy: spectrum does not match grid");
    const auto it = std::max_element(spectrum.energies.begin(), spectrum.energies.end());
    PositionEstimate est;
    est.index = static_cast<std::size_t>(it - spectrum.energies.begin());
    est.peak_score = *it;
    est.tie_count = static_cast<int>(std::count(spectrum.energies.begin(), spectrum.energies.end(), *it));
    est.degenerate = *it == 0.0;
    est.position = grid.candidates[est.index];
    return est;
}

void write_spectrum_csv(std::ostream& os, const SearchGrid& grid, const PseudoSpectrum& spectrum)
{
    os << "index,r_m,theta_rad,phi_rad,score,residual,energy\n";
    for (std::size_t p = 0; p < spectrum.size(); ++p) {
        const auto& c = grid.candidates[p];
        os << p << ',' << format_double(c.r) << ',' << format_double(c.theta) << ',' << format_double(c.phi) << ','
           << format_double(spectrum.scores[p]) << ',' << format_double(spectrum.residual_scores[p]) << ','
           << format_double(spectrum.energies[p]) << '\n';
    }
}

} // namespace nfloc
