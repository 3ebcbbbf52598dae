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

#include <vector>

#include "wavestack/carrier.hpp"
#include "wavestack/types.hpp"

namespace wavestack {

/// Rectangular lattice of metasurface elements (or antennas) on a plane.
///
/// Elements are ordered row-major: index = row * cols + col. The lattice is
/// centered on `center` and spans the plane orthogonal to `normal`; the
/// in-plane axes used to lay it out are stored so that responses and
/// serialization are reproducible. For a +z normal the axes are +x (columns)
/// and +y (rows).
struct PlanarGrid
{
    int rows = 0;
    int cols = 0;
    double pitch_m = 0.0;
    Vec3 center = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
    Vec3 axis_col = Vec3::UnitX();
    Vec3 axis_row = Vec3::UnitY();
    std::vector<Vec3> element_positions; // row-major

    int size() const { return rows * cols; }

    /// Physical aperture extents; element footprints count toward the span,
    /// so a row of n elements is n * pitch wide.
    double width_m() const { return cols * pitch_m; }
    double height_m() const { return rows * pitch_m; }
    double aperture_diagonal_m() const;
};

/// Builds a centered row-major lattice. Throws validation_error for
/// non-positive dimensions/pitch or a normal that is not unit length.
PlanarGrid make_planar_grid(int rows, int cols, double pitch_m, const Vec3& center,
                            const Vec3& normal);

/// Near-/far-field boundary 2*D^2/lambda for an aperture of size D.
double rayleigh_distance(double aperture_m, const CarrierSpec& carrier);

/// Grid overload; the governing aperture is the diagonal extent.
double rayleigh_distance(const PlanarGrid& grid, const CarrierSpec& carrier);

} // namespace wavestack
