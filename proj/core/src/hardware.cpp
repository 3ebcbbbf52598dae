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

#include "wavestack/hardware.hpp"

#include <cmath>
#include <numbers>

#include "wavestack/errors.hpp"

namespace wavestack {

HardwareProfile HardwareProfile::ht1()
{
    HardwareProfile p;
    p.kind = HardwareType::HT1_fixed;
    return p;
}

HardwareProfile HardwareProfile::ht2(std::optional<int> phase_bits)
{
    if (phase_bits && *phase_bits < 1)
        throw validation_error("HardwareProfile: phase_bits must be >= 1");
    HardwareProfile p;
    p.kind = HardwareType::HT2_passive_programmable;
    p.phase_bits = phase_bits;
    return p;
}

HardwareProfile HardwareProfile::ht3(double amplitude_min, double amplitude_max)
{
    if (!(amplitude_min >= 0.0) || !(amplitude_max > amplitude_min))
        throw validation_error("HardwareProfile: invalid amplitude range");
    HardwareProfile p;
    p.kind = HardwareType::HT3_active;
    p.amplitude_range = {amplitude_min, amplitude_max};
    p.coupling_curve = [amplitude_min, amplitude_max](double v) {
        const double a = amplitude_min + (amplitude_max - amplitude_min) * v;
        const double phase = 2.0 * std::numbers::pi * v;
        return std::pair<double, double>{a, phase};
    };
    return p;
}

double apply_saturation(const HardwareProfile& profile, double amplitude)
{
    if (!profile.saturation_amplitude)
        return amplitude;
    const double sat = *profile.saturation_amplitude;
    return sat * std::tanh(amplitude / sat);
}

} // namespace wavestack
