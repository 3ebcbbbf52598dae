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

#include "wavestack/doa.hpp"

#include <cmath>
#include <numbers>

#include "wavestack/errors.hpp"
#include "wavestack/philox.hpp"

namespace wavestack {

namespace {
constexpr double kPi = std::numbers::pi;
}

int AngularGrid::region_index(double azimuth_rad, double elevation_rad) const
{
    if (azimuth_rad < 0.0 || azimuth_rad >= 2.0 * kPi)
        throw validation_error("AngularGrid: azimuth outside [0, 2*pi)");
    if (elevation_rad < 0.0 || elevation_rad >= kPi / 2.0)
        throw validation_error("AngularGrid: elevation outside [0, pi/2)");
    const double az_width = 2.0 * kPi / az_bins;
    const double el_width = kPi / 2.0 / el_bins;
    const int az_bin = std::min(static_cast<int>(azimuth_rad / az_width), az_bins - 1);
    const int el_bin = std::min(static_cast<int>(elevation_rad / el_width), el_bins - 1);
    return el_bin * az_bins + az_bin;
}

std::pair<double, double> AngularGrid::region_center(int index) const
{
    if (index < 0 || index >= num_regions())
        throw validation_error("AngularGrid: region index out of range");
    const int az_bin = index % az_bins;
    const int el_bin = index / az_bins;
    const double az_width = 2.0 * kPi / az_bins;
    const double el_width = kPi / 2.0 / el_bins;
    return {(az_bin + 0.5) * az_width, (el_bin + 0.5) * el_width};
}

std::vector<DoaSample> generate_doa_dataset(const AngularGrid& grid,
                                            const PlanarGrid& receiver,
                                            const CarrierSpec& carrier,
                                            int samples_per_region, double snr_db,
                                            std::uint64_t seed)
{
    if (samples_per_region < 1)
        throw validation_error("generate_doa_dataset: samples_per_region must be >= 1");

    const double az_width = 2.0 * kPi / grid.az_bins;
    const double el_width = kPi / 2.0 / grid.el_bins;
    const bool noiseless = std::isinf(snr_db);
    const double noise_std = noiseless ? 0.0 : std::sqrt(std::pow(10.0, -snr_db / 10.0));
    const std::uint64_t subseed = Philox::derive_subseed(seed, "doa-dataset");

    std::vector<DoaSample> samples;
    samples.reserve(static_cast<std::size_t>(grid.num_regions()) * samples_per_region);
    for (int g = 0; g < grid.num_regions(); ++g)
    {
        const int az_bin = g % grid.az_bins;
        const int el_bin = g / grid.az_bins;
        for (int s = 0; s < samples_per_region; ++s)
        {
            Philox rng(subseed,
                       static_cast<std::uint64_t>(g) * samples_per_region +
                           static_cast<std::uint64_t>(s));
            const double az = (az_bin + rng.next_double()) * az_width;
            const double el = (el_bin + rng.next_double()) * el_width;

            DoaSample sample;
            sample.field = far_field_steering(receiver, az, el, carrier);
            if (!noiseless)
                for (Eigen::Index n = 0; n < sample.field.size(); ++n)
                    sample.field(n) += noise_std * rng.next_cgaussian();
            sample.label = g;
            sample.snr_db = snr_db;
            sample.azimuth_rad = az;
            sample.elevation_rad = el;
            samples.push_back(std::move(sample));
        }
    }
    return samples;
}

} // namespace wavestack
