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

#include <functional>
#include <optional>
#include <utility>

namespace wavestack {

/// Metasurface hardware classes:
///   HT1 - fixed passive: transmission set at fabrication, |t| = 1
///   HT2 - programmable passive: phase-only control, optionally quantized
///   HT3 - programmable active: amplifier per meta-atom, amplitude and phase
///         coupled through a shared control voltage
enum class HardwareType
{
    HT1_fixed,
    HT2_passive_programmable,
    HT3_active,
};

struct HardwareProfile
{
    HardwareType kind = HardwareType::HT2_passive_programmable;

    /// HT2: number of phase control bits; 1 bit restricts phases to {0, pi}.
    std::optional<int> phase_bits;

    /// HT3: realizable amplitude interval [min, max].
    std::optional<std::pair<double, double>> amplitude_range;

    /// HT3: control voltage v in [0,1] -> (amplitude, phase). Both components
    /// are monotone in v. Injectable for measured calibration data; the
    /// default maps v linearly onto the amplitude range and onto [0, 2*pi).
    std::function<std::pair<double, double>(double)> coupling_curve;

    /// HT3 amplifier soft limiting a -> a_sat * tanh(a / a_sat). Disabled by
    /// default.
    std::optional<double> saturation_amplitude;

    bool unit_modulus() const { return kind != HardwareType::HT3_active; }

    static HardwareProfile ht1();
    static HardwareProfile ht2(std::optional<int> phase_bits = std::nullopt);
    static HardwareProfile ht3(double amplitude_min, double amplitude_max);
};

/// Applies the profile's saturation map if enabled, otherwise returns a.
double apply_saturation(const HardwareProfile& profile, double amplitude);

} // namespace wavestack
