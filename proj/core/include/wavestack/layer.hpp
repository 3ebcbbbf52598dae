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

#include "wavestack/geometry.hpp"
#include "wavestack/hardware.hpp"
#include "wavestack/types.hpp"

namespace wavestack {

/// Wraps an angle into [0, 2*pi).
double wrap_phase(double phase);

/// One metasurface layer: per-meta-atom transmission coefficients on a grid.
/// Phases are stored wrapped into [0, 2*pi); all phase arithmetic is circular.
struct MetasurfaceLayer
{
    PlanarGrid grid;
    RealVector phases;     // [0, 2*pi)
    RealVector amplitudes; // exactly 1 for HT1/HT2
    HardwareProfile profile;

    /// Diagonal transmission coefficients a_n * exp(j phi_n).
    ComplexVector transmission() const;

    /// Enforces length and hardware-profile invariants.
    void validate() const;
};

/// Layer with all-zero phases and unit amplitudes.
MetasurfaceLayer make_uniform_layer(const PlanarGrid& grid,
                                    const HardwareProfile& profile = HardwareProfile::ht2());

/// Snaps every phase to the nearest of 2^bits uniform levels on the circle
/// (circular distance, ties toward the lower level value). Idempotent; with
/// bits = 1 the output phases are exactly {0, pi}.
MetasurfaceLayer quantize_phases(const MetasurfaceLayer& layer, int bits);

} // namespace wavestack
