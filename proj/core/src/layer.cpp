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

#include "wavestack/layer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wavestack/errors.hpp"

namespace wavestack {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_phase(double phase)
{
    double w = std::fmod(phase, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    // fmod can return 2*pi when phase is a tiny negative number
    if (w >= kTwoPi)
        w = 0.0;
    return w;
}

ComplexVector MetasurfaceLayer::transmission() const
{
    ComplexVector t(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        t(i) = std::polar(amplitudes(i), phases(i));
    return t;
}

void MetasurfaceLayer::validate() const
{
    if (phases.size() != grid.size() || amplitudes.size() != grid.size())
        throw dimension_error("MetasurfaceLayer: phases/amplitudes do not match grid size");
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        if (!(phases(i) >= 0.0 && phases(i) < kTwoPi))
            throw validation_error("MetasurfaceLayer: phase outside [0, 2*pi) at atom " +
                                   std::to_string(i));
    if (profile.unit_modulus())
    {
        for (Eigen::Index i = 0; i < amplitudes.size(); ++i)
            if (amplitudes(i) != 1.0)
                throw validation_error("MetasurfaceLayer: passive profile requires unit "
                                       "amplitude at atom " +
                                       std::to_string(i));
    }
    else if (profile.amplitude_range)
    {
        const auto [lo, hi] = *profile.amplitude_range;
        for (Eigen::Index i = 0; i < amplitudes.size(); ++i)
            if (amplitudes(i) < lo || amplitudes(i) > hi)
                throw validation_error("MetasurfaceLayer: amplitude outside HT3 range at atom " +
                                       std::to_string(i));
    }
}

MetasurfaceLayer make_uniform_layer(const PlanarGrid& grid, const HardwareProfile& profile)
{
    MetasurfaceLayer layer;
    layer.grid = grid;
    layer.phases = RealVector::Zero(grid.size());
    layer.amplitudes = RealVector::Ones(grid.size());
    layer.profile = profile;
    return layer;
}

MetasurfaceLayer quantize_phases(const MetasurfaceLayer& layer, int bits)
{
    if (bits < 1)
        throw validation_error("quantize_phases: bits must be >= 1");
    const int levels = 1 << bits;
    const double step = kTwoPi / levels;

    MetasurfaceLayer out = layer;
    for (Eigen::Index i = 0; i < out.phases.size(); ++i)
    {
        const double phase = wrap_phase(out.phases(i));
        const int below = static_cast<int>(std::floor(phase / step)) % levels;
        const int above = (below + 1) % levels;
        auto circular_dist = [&](int level) {
            double diff = std::abs(phase - level * step);
            return std::min(diff, kTwoPi - diff);
        };
        const double d_below = circular_dist(below);
        const double d_above = circular_dist(above);
        int chosen;
        if (d_below < d_above)
            chosen = below;
        else if (d_above < d_below)
            chosen = above;
        else
            chosen = std::min(below, above); // tie: lower level value
        out.phases(i) = chosen * step;
    }
    if (out.profile.kind == HardwareType::HT2_passive_programmable)
        out.profile.phase_bits = bits;
    return out;
}

} // namespace wavestack
