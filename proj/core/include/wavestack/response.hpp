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

namespace wavestack {

/// Angle convention: azimuth in the x-y plane from +x, elevation from the
/// plane toward +z. Returns the unit propagation direction of a source at
/// (azimuth, elevation).
Vec3 direction_from_angles(double azimuth_rad, double elevation_rad);

/// Plane-wave array response exp(j k <u, p_n>) with unit-modulus entries.
/// Preconditions: elevation in [0, pi/2], azimuth in [0, 2*pi).
FieldVector far_field_steering(const PlanarGrid& grid, double azimuth_rad,
                               double elevation_rad, const CarrierSpec& carrier);

/// Spherical-wave response (lambda / (4 pi d_n)) * exp(-j 2 pi d_n / lambda)
/// with exact element-to-point distances. Throws singularity_error when the
/// point coincides with a grid element.
FieldVector near_field_response(const PlanarGrid& grid, const Vec3& point,
                                const CarrierSpec& carrier);

} // namespace wavestack
