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

#include "wavestack/carrier.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wavestack/errors.hpp"

namespace wavestack {

CarrierSpec CarrierSpec::from_frequency(double frequency_hz)
{
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw validation_error("CarrierSpec: frequency must be positive, got " +
                               std::to_string(frequency_hz));
    return CarrierSpec{frequency_hz, kSpeedOfLight / frequency_hz};
}

double CarrierSpec::wavenumber() const
{
    return 2.0 * std::numbers::pi / wavelength_m;
}

void CarrierSpec::validate() const
{
    if (!(frequency_hz > 0.0) || !(wavelength_m > 0.0))
        throw validation_error("CarrierSpec: frequency and wavelength must be positive");
    const double rel = std::abs(wavelength_m * frequency_hz - kSpeedOfLight) / kSpeedOfLight;
    if (rel > 1e-9)
        throw validation_error("CarrierSpec: wavelength * frequency deviates from c by " +
                               std::to_string(rel));
}

} // namespace wavestack
