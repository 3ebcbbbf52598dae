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

#include "wavestack/geometry.hpp"

#include <cmath>
#include <string>

#include "wavestack/errors.hpp"

namespace wavestack {

double PlanarGrid::aperture_diagonal_m() const
{
    return std::hypot(width_m(), height_m());
}

PlanarGrid make_planar_grid(int rows, int cols, double pitch_m, const Vec3& center,
                            const Vec3& normal)
{
    if (rows < 1 || cols < 1)
        throw validation_error("make_planar_grid: rows and cols must be >= 1");
    if (!(pitch_m > 0.0) || !std::isfinite(pitch_m))
        throw validation_error("make_planar_grid: pitch must be positive");
    if (std::abs(normal.norm() - 1.0) > 1e-9)
        throw validation_error("make_planar_grid: normal must be unit length, |n| = " +
                               std::to_string(normal.norm()));

    PlanarGrid grid;
    grid.rows = rows;
    grid.cols = cols;
    grid.pitch_m = pitch_m;
    grid.center = center;
    grid.normal = normal;

    // In-plane axes: columns along x when the normal is (anti)parallel to z,
    // otherwise columns along the horizontal direction z x n.
    if (std::abs(normal.dot(Vec3::UnitZ())) > 1.0 - 1e-12)
        grid.axis_col = Vec3::UnitX();
    else
        grid.axis_col = Vec3::UnitZ().cross(normal).normalized();
    grid.axis_row = normal.cross(grid.axis_col);

    grid.element_positions.reserve(static_cast<std::size_t>(rows) * cols);
    const double row_off = 0.5 * (rows - 1);
    const double col_off = 0.5 * (cols - 1);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            grid.element_positions.push_back(center + (c - col_off) * pitch_m * grid.axis_col +
                                             (r - row_off) * pitch_m * grid.axis_row);
    return grid;
}

double rayleigh_distance(double aperture_m, const CarrierSpec& carrier)
{
    if (!(aperture_m > 0.0))
        throw validation_error("rayleigh_distance: aperture must be positive");
    return 2.0 * aperture_m * aperture_m / carrier.wavelength_m;
}

double rayleigh_distance(const PlanarGrid& grid, const CarrierSpec& carrier)
{
    return rayleigh_distance(grid.aperture_diagonal_m(), carrier);
}

} // namespace wavestack
