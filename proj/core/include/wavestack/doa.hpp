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

#include "wavestack/response.hpp"

namespace wavestack {

/// Uniform partition of the upper half space: azimuth bins over [0, 2*pi),
/// elevation bins over [0, pi/2). Region index is row-major:
/// index = el_bin * az_bins + az_bin.
struct AngularGrid
{
    int az_bins = 8;
    int el_bins = 8;

    int num_regions() const { return az_bins * el_bins; }
    int region_index(double azimuth_rad, double elevation_rad) const;
    /// (azimuth, elevation) of a region's center.
    std::pair<double, double> region_center(int index) const;
};

/// One labeled incident-field sample at the receiver aperture.
struct DoaSample
{
    FieldVector field;
    int label = 0;
    double snr_db = 0.0;
    double azimuth_rad = 0.0;
    double elevation_rad = 0.0;
};

/// Balanced dataset: samples_per_region draws per region, angles uniform in
/// angle within each region, complex AWGN per element sized so the
/// per-element SNR matches snr_db (pass +inf to disable noise). Sample i of
/// region g uses Philox(subseed(seed, "doa-dataset"), stream = g *
/// samples_per_region + i): two uniforms for the angles, then one CN(0,1)
/// per element.
std::vector<DoaSample> generate_doa_dataset(const AngularGrid& grid,
                                            const PlanarGrid& receiver,
                                            const CarrierSpec& carrier,
                                            int samples_per_region, double snr_db,
                                            std::uint64_t seed);

} // namespace wavestack
