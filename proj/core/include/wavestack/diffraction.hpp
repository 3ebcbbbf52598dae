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

#include "wavestack/carrier.hpp"
#include "wavestack/geometry.hpp"
#include "wavestack/types.hpp"

namespace wavestack {

/// Free-space propagation matrix between two element planes. Entry (m, n) is
/// the Rayleigh-Sommerfeld coefficient from source element n to target
/// element m, so fields propagate by left-multiplication.
struct DiffractionOperator
{
    ComplexMatrix matrix; // target elements x source elements
    PlanarGrid source_grid;
    PlanarGrid target_grid;
    double spacing_m = 0.0; // plane-to-plane distance

    void validate() const;
};

/// First Rayleigh-Sommerfeld coefficient
///   w = (A * d_z / d^2) * (1 / (2 pi d) - j / lambda) * exp(j 2 pi d / lambda)
/// with d the source-target distance, d_z its component along the source
/// normal and A the radiating element area. Throws singularity_error for
/// coincident points.
Complex rs_coefficient(const Vec3& source_pos, const Vec3& source_normal,
                       double source_area_m2, const Vec3& target_pos,
                       const CarrierSpec& carrier);

/// Builds the full source->target propagation matrix. The grids must be
/// parallel and non-coincident; the source normal is oriented toward the
/// target plane so the obliquity factor is positive. Element area is
/// source.pitch_m^2.
DiffractionOperator build_interlayer_operator(const PlanarGrid& source,
                                              const PlanarGrid& target,
                                              const CarrierSpec& carrier);

} // namespace wavestack
