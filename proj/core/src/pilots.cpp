// SPDX-License-Identifier: Apache-2.0
//
// wavestack: wave-domain signal processing on stacked metasurfaces
// Copyright (C) 2026 wavestack contributors
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

#include "wavestack/pilots.hpp"

#include <cmath>
#include <numbers>

#include "wavestack/errors.hpp"
#include "wavestack/philox.hpp"

namespace wavestack {

namespace {

ComplexMatrix slot_receive_map(SimStack sim, const std::vector<RealVector>& phases)
{
    sim.set_phases(phases);
    return receive_transfer(sim);
}

} // namespace

ComplexMatrix stacked_sensing_matrix(const SimStack& sim, const PilotBook& book)
{
    const int n = sim.output_size();
    const int feeds = sim.num_feeds();
    const int unknowns = n * book.num_users;
    ComplexMatrix sensing(static_cast<Eigen::Index>(book.slots) * feeds, unknowns);
    for (int t = 0; t < book.slots; ++t)
    {
        const ComplexMatrix b = slot_receive_map(sim, book.slot_phases[static_cast<std::size_t>(t)]);
        // vec(B H x) = (x^T kron B) vec(H), column-major vec
        for (int k = 0; k < book.num_users; ++k)
            sensing.block(static_cast<Eigen::Index>(t) * feeds,
                          static_cast<Eigen::Index>(k) * n, feeds, n) =
                book.pilot_symbols(k, t) * b;
    }
    return sensing;
}

PilotBook make_pilot_book(const SimStack& sim, int num_users, int slots, std::uint64_t seed)
{
    if (num_users < 1 || slots < 1)
        throw validation_error("make_pilot_book: num_users and slots must be >= 1");

    PilotBook book;
    book.slots = slots;
    book.num_users = num_users;
    book.slot_phases.resize(static_cast<std::size_t>(slots));
    const std::uint64_t subseed = Philox::derive_subseed(seed, "pilot-phases");
    for (int t = 0; t < slots; ++t)
    {
        Philox rng(subseed, static_cast<std::uint64_t>(t));
        auto& layers = book.slot_phases[static_cast<std::size_t>(t)];
        for (const auto& layer : sim.layers)
        {
            RealVector phases(layer.grid.size());
            for (Eigen::Index i = 0; i < phases.size(); ++i)
                phases(i) = rng.next_phase();
            layers.push_back(std::move(phases));
        }
    }

    // user-separating DFT factor times a golden-ratio per-slot common phase;
    // the K x T symbol matrix keeps full row rank for any T >= K
    constexpr double golden = 0.6180339887498948482; // (sqrt(5) - 1) / 2
    book.pilot_symbols.resize(num_users, slots);
    for (int t = 0; t < slots; ++t)
    {
        const double x = (t + 1) * golden;
        const double slot_phase = 2.0 * std::numbers::pi * (x - std::floor(x));
        for (int k = 0; k < num_users; ++k)
            book.pilot_symbols(k, t) = std::polar(
                1.0, slot_phase + 2.0 * std::numbers::pi * k * t / num_users);
    }

    const int unknowns = sim.output_size() * num_users;
    if (slots * sim.num_feeds() >= unknowns)
    {
        const ComplexMatrix sensing = stacked_sensing_matrix(sim, book);
        Eigen::ColPivHouseholderQR<ComplexMatrix> qr(sensing);
        if (qr.rank() < unknowns)
            throw rank_error("make_pilot_book: sensing matrix is column-rank deficient");
    }
    return book;
}

ChannelEstimate ls_channel_estimate(const ComplexMatrix& observations, const PilotBook& book,
                                    const SimStack& sim, const ComplexMatrix* ground_truth)
{
    const int n = sim.output_size();
    const int feeds = sim.num_feeds();
    if (observations.rows() != feeds || observations.cols() != book.slots)
        throw dimension_error("ls_channel_estimate: observations must be feeds x slots");

    const int unknowns = n * book.num_users;
    const ComplexMatrix sensing = stacked_sensing_matrix(sim, book);
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(sensing);
    if (qr.rank() < unknowns)
        throw underdetermined_error(
            "ls_channel_estimate: underdetermined system (rank " +
            std::to_string(qr.rank()) + " < " + std::to_string(unknowns) +
            " unknowns); add pilot slots");

    ComplexVector y(sensing.rows());
    for (int t = 0; t < book.slots; ++t)
        y.segment(static_cast<Eigen::Index>(t) * feeds, feeds) = observations.col(t);

    const ComplexVector solution = qr.solve(y);

    ChannelEstimate est;
    est.channel = Eigen::Map<const ComplexMatrix>(solution.data(), n, book.num_users);
    est.residual = (sensing * solution - y).norm() / std::max(y.norm(), 1e-300);
    if (ground_truth)
    {
        if (ground_truth->rows() != n || ground_truth->cols() != book.num_users)
            throw dimension_error("ls_channel_estimate: ground truth shape mismatch");
        est.nmse = (est.channel - *ground_truth).squaredNorm() / ground_truth->squaredNorm();
    }
    return est;
}

} // namespace wavestack
