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

#include "wavestack/response.hpp"

#include <cmath>
#include <numbers>

#include "wavestack/errors.hpp"

namespace wavestack {

Vec3 direction_from_angles(double azimuth_rad, double elevation_rad)
{
    const double ce = std::cos(elevation_rad);
    return Vec3(ce * std::cos(azimuth_rad), ce * std::sin(azimuth_rad),
                std::sin(elevation_rad));
}

FieldVector far_field_steering(const PlanarGrid& grid, double azimuth_rad,
                               double elevation_rad, const CarrierSpec& carrier)
{
    constexpr double pi = std::numbers::pi;
    if (elevation_rad < 0.0 || elevation_rad > pi / 2.0)
        throw validation_error("far_field_steering: elevation outside [0, pi/2]");
    if (azimuth_rad < 0.0 || azimuth_rad >= 2.0 * pi)
        throw validation_error("far_field_steering: azimuth outside [0, 2*pi)");

    const Vec3 u = direction_from_angles(azimuth_rad, elevation_rad);
    const double k = carrier.wavenumber();
    FieldVector response(grid.size());
    for (int n = 0; n < grid.size(); ++n)
    {
        const double phase = k * u.dot(grid.element_positions[static_cast<std::size_t>(n)]);
        response(n) = std::polar(1.0, phase);
    }
    return response;
}

FieldVector near_field_response(const PlanarGrid& grid, const Vec3& point,
                                const CarrierSpec& carrier)
{
    constexpr double pi = std::numbers::pi;
    const double lambda = carrier.wavelength_m;
    FieldVector response(grid.size());
    for (int n = 0; n < grid.size(); ++n)
    {
        const double d = (point - grid.element_positions[static_cast<std::size_t>(n)]).norm();
        if (d < 1e-12)
            throw singularity_error("near_field_response: point coincides with element " +
                                    std::to_string(n));
        response(n) = std::polar(lambda / (4.0 * pi * d), -2.0 * pi * d / lambda);
    }
    return response;
}

} // namespace wavestack
