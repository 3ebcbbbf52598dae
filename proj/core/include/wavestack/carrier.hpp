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

#include "wavestack/types.hpp"

namespace wavestack {

/// Carrier frequency and derived free-space wavelength.
struct CarrierSpec
{
    double frequency_hz = 0.0;
    double wavelength_m = 0.0;

    static CarrierSpec from_frequency(double frequency_hz);

    double wavenumber() const; // 2*pi / wavelength

    /// Checks frequency > 0 and wavelength * frequency == c to 1e-9 relative.
    void validate() const;
};

} // namespace wavestack
