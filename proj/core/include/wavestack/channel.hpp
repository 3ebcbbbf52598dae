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

#include "wavestack/carrier.hpp"
#include "wavestack/geometry.hpp"
#include "wavestack/types.hpp"

namespace wavestack {

/// Isotropic-scattering spatial correlation R_{mn} = sinc(2 d_{mn} / lambda)
/// (normalized sinc), projected onto the PSD cone by clamping negative
/// eigenvalues. `clamped_mass` is the total magnitude of eigenvalues clamped,
/// reported so callers can verify it stays below 1% of the trace.
struct SpatialCorrelation
{
    RealMatrix matrix;
    double clamped_mass = 0.0;
};

SpatialCorrelation sinc_correlation(const PlanarGrid& grid, const CarrierSpec& carrier);

/// One draw of a spatially correlated Rayleigh fading channel,
/// H = sqrt(pathloss) * G * R^{1/2}, rows are receivers (users).
struct ChannelRealization
{
    ComplexMatrix matrix;   // receive (users) x transmit (grid elements)
    RealMatrix correlation; // PSD-projected R over the grid elements
    double pathloss = 0.0;
    std::uint64_t seed = 0;
    double clamped_mass = 0.0;
};

/// Draws H with G entries iid CN(0,1) from Philox(seed, stream=0), consumed
/// row-major (user-major). Identical (grid, num_users, pathloss, seed,
/// carrier) reproduce the matrix bit-exactly.
ChannelRealization sample_correlated_rayleigh(const PlanarGrid& grid, int num_users,
                                              double pathloss, std::uint64_t seed,
                                              const CarrierSpec& carrier);

} // namespace wavestack
