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

#include "nfloc/combiner_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nfloc {

PhaseCodebook::PhaseCodebook(int bits) : bits_(bits)
{
    if (bits < 1 || bits > 20)
        throw std::invalid_argument("PhaseCodebook: bits must be in [1, 20]");
    const std::size_t k = std::size_t{1} << bits;
    step_ = kPi / static_cast<double>(k - 1);
    phases_.resize(k);
    units_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        phases_[i] = -kPi / 2 + static_cast<double>(i) * step_;
        units_[i] = std::polar(1.0, phases_[i]);
    }
    phases_.back() = kPi / 2;
}

std::size_t PhaseCodebook::nearest_index(double phi) const
{
    const double p = std::clamp(wrap_phase(phi), -kPi / 2, kPi / 2);
    const auto last = static_cast<long>(phases_.size()) - 1;
    const long guess = std::clamp(std::lround((p + kPi / 2) / step_), 0L, last);

    // The rounded guess can be off by one near a decision boundary.
    long best = -1;
    double best_dist = 0.0;
    for (long i = std::max(0L, guess - 1); i <= std::min(last, guess + 1); ++i) {
        const double d = std::abs(p - phases_[static_cast<std::size_t>(i)]);
        if (best < 0 || d < best_dist) {
            best = i;
            best_dist = d;
        }
    }
    return static_cast<std::size_t>(best);
}

double quantize_phase(double phi, const PhaseCodebook& codebook)
{
    return codebook.phase(codebook.nearest_index(phi));
}

std::vector<cplx> effective_channel(const ChannelVector& h_hat, const PropagationMatrix& prop)
{
    if (h_hat.size() != prop.diag.size())
        throw std::invalid_argument("effective_channel: dimension mismatch");
    std::vector<cplx> c(h_hat.size());
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = std::abs(prop.diag[k]) * std::conj(h_hat.gains[k]);
    return c;
}

double op_objective(std::span<const cplx> w_tilde, std::span<const cplx> c, const ArrayGeometry& geom)
{
    if (w_tilde.size() != geom.size() || c.size() != geom.size())
        throw std::invalid_argument("op_objective: dimension mismatch");
    double total = 0.0;
    for (int i = 0; i < geom.n_rf; ++i) {
        cplx acc{};
        for (int n = 0; n < geom.n_e; ++n) {
            const auto k = geom.flat_index(i, n);
            acc += std::conj(w_tilde[k]) * c[k];
        }
        total += std::norm(acc);
    }
    return total;
}

StripSolution solve_strip(std::span<const cplx> c, const PhaseCodebook& codebook)
{
    const std::size_t m = c.size();
    const long K = static_cast<long>(codebook.size());
    const long period = 2 * (K - 1); // lattice points on the circle
    const long pi_point = (3 * K - 4) / 2;
    const double step = codebook.step();
    const double lattice0 = -kPi / 2 + 0.5 * step;

    // Arc a is (L_a, L_{a+1}]; maps to the codebook index it quantizes to.
    const auto arc_index = [&](long a) -> std::size_t {
        if (a <= K - 2)
            return static_cast<std::size_t>(a + 1);
        if (a < pi_point)
            return static_cast<std::size_t>(K - 1);
        return 0;
    };

    std::vector<long> arc(m);
    std::vector<double> first(m); // psi + pi at which the element next crosses a lattice point, in [0, step]
    std::vector<std::size_t> idx(m);
    cplx sum{};
    for (std::size_t e = 0; e < m; ++e) {
        const double s = (std::arg(c[e]) - kPi - lattice0) / step;
        const double a = std::ceil(s) - 1.0;
        arc[e] = ((static_cast<long>(a) % period) + period) % period;
        first[e] = (a + 1.0 - s) * step;
        idx[e] = arc_index(arc[e]);
        sum += std::conj(codebook.unit(idx[e])) * c[e];
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return first[a] < first[b]; });

    double best = std::norm(sum);
    double best_offset = -kPi;
    long best_window = -1;
    std::size_t best_pos = 0;

    for (long w = 0; w < period; ++w) {
        for (std::size_t pos = 0; pos < m; ++pos) {
            const std::size_t e = order[pos];
            const double shift = first[e] + static_cast<double>(w) * step;
            if (shift >= 2.0 * kPi)
                continue;
            const std::size_t next = arc_index((arc[e] + 1 + w) % period);
            if (next == idx[e])
                continue;
            sum += (std::conj(codebook.unit(next)) - std::conj(codebook.unit(idx[e]))) * c[e];
            idx[e] = next;
            const double value = std::norm(sum);
            if (value > best * (1.0 + 1e-13)) {
                best = value;
                best_offset = -kPi + shift;
                best_window = w;
                best_pos = pos;
            }
        }
    }

    // Every element crosses exactly one lattice point per window, so the
    // winning state follows from the event position alone.
    StripSolution out;
    out.codeword.resize(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
        const std::size_t e = order[pos];
        const long crossings = best_window < 0 ? 0 : (pos <= best_pos ? best_window + 1 : best_window);
        out.codeword[e] = arc_index((arc[e] + crossings) % period);
    }
    out.offset = best_offset;
    cplx acc{};
    for (std::size_t e = 0; e < m; ++e)
        acc += std::conj(codebook.unit(out.codeword[e])) * c[e];
    out.objective = std::norm(acc);
    return out;
}

CombinerSolution solve_op(const ChannelVector& h_hat, const PropagationMatrix& prop, const ArrayGeometry& geom,
                          const PhaseCodebook& codebook)
{
    if (h_hat.size() != geom.size())
        throw std::invalid_argument("solve_op: channel length does not match geometry");
    if (!(h_hat.norm() > 0.0))
        throw std::invalid_argument("solve_op: zero-norm candidate channel");

    const auto c = effective_channel(h_hat, prop);
    CombinerSolution sol;
    sol.n_rf = geom.n_rf;
    sol.n_e = geom.n_e;
    sol.codeword.resize(geom.size());
    sol.w_tilde.resize(geom.size());
    sol.offsets.resize(static_cast<std::size_t>(geom.n_rf));

    const auto n_e = static_cast<std::size_t>(geom.n_e);
    for (int i = 0; i < geom.n_rf; ++i) {
        const std::size_t base = geom.flat_index(i, 0);
        const auto strip = solve_strip(std::span<const cplx>(c).subspan(base, n_e), codebook);
        for (std::size_t n = 0; n < n_e; ++n) {
            sol.codeword[base + n] = strip.codeword[n];
            sol.w_tilde[base + n] = codebook.unit(strip.codeword[n]);
        }
        sol.offsets[static_cast<std::size_t>(i)] = strip.offset;
    }
    sol.objective = op_objective(sol.w_tilde, c, geom);
    return sol;
}

CombinerMatrix finalize_weights(const CombinerSolution& solution, const WaveguideConfig& waveguide)
{
    if (waveguide.beta.size() != static_cast<std::size_t>(solution.n_rf) ||
        waveguide.element_positions.size() != static_cast<std::size_t>(solution.n_e))
        throw std::invalid_argument("finalize_weights: waveguide does not match solution");

    std::vector<LorentzianWeight> weights(solution.w_tilde.size());
    std::size_t clamped = 0;
    for (int i = 0; i < solution.n_rf; ++i) {
        const double beta = waveguide.beta[static_cast<std::size_t>(i)];
        for (int n = 0; n < solution.n_e; ++n) {
            const std::size_t k = static_cast<std::size_t>(i) * static_cast<std::size_t>(solution.n_e) + static_cast<std::size_t>(n);
            const auto mapped = map_to_lorentzian(solution.w_tilde[k], waveguide.element_positions[static_cast<std::size_t>(n)], beta);
            weights[k] = mapped.weight;
            clamped += mapped.clamped ? 1 : 0;
        }
    }
    return CombinerMatrix(solution.n_rf, solution.n_e, std::move(weights), clamped);
}

} // namespace nfloc
