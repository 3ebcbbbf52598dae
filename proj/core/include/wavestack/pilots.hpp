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

#pragma once

#include <cstdint>
#include <vector>

#include "wavestack/sim_stack.hpp"
#include "wavestack/types.hpp"

namespace wavestack {

/// Multi-slot uplink pilot schedule: per-slot SIM phase configurations plus
/// unit-modulus pilot symbols. Users transmit pilots while the receiver
/// reconfigures its SIM each slot, collecting several projections of the
/// same unknown channel.
///
/// Conventions (fixed so the sensing matrix is reproducible):
///  - slot phases: uniform in [0, 2*pi) from Philox(subseed(seed,
///    "pilot-phases"), stream = slot), layer-major then element-major;
///  - pilot symbols: x(k, t) = exp(j 2 pi (k t / K + frac((t + 1) g))) with
///    g = (sqrt(5) - 1) / 2; the golden-ratio term is a per-slot common
///    phase, the DFT term separates users so the symbol matrix has full row
///    rank for any T >= K.
struct PilotBook
{
    int slots = 0;
    int num_users = 0;
    std::vector<std::vector<RealVector>> slot_phases; // [slot][layer]
    ComplexMatrix pilot_symbols;                      // users x slots
};

/// Uplink observation model for one slot t:
///   y_t = B_t H x_t + n_t,  B_t = receive_transfer(sim | slot phases t)
/// with H the unknown (output-aperture elements x users) channel. The
/// stacked sensing matrix maps vec(H) (column-major) to the stacked
/// observations.
ComplexMatrix stacked_sensing_matrix(const SimStack& sim, const PilotBook& book);

/// Draws a random full-rank pilot book. Throws rank_error if slots *
/// feeds >= unknowns but the stacked sensing matrix is column-rank
/// deficient.
PilotBook make_pilot_book(const SimStack& sim, int num_users, int slots,
                          std::uint64_t seed);

struct ChannelEstimate
{
    ComplexMatrix channel; // output elements x users
    double residual = 0.0; // ||A vec(H) - y|| / ||y||
    double nmse = -1.0;    // vs ground truth when supplied, else -1
};

/// Least-squares channel estimate from per-slot observations (feeds x
/// slots). Throws underdetermined_error when the sensing matrix has
/// deficient column rank.
ChannelEstimate ls_channel_estimate(const ComplexMatrix& observations,
                                    const PilotBook& book, const SimStack& sim,
                                    const ComplexMatrix* ground_truth = nullptr);

} // namespace wavestack
