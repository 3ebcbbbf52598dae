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
#include <optional>
#include <vector>

#include "wavestack/diffraction.hpp"
#include "wavestack/layer.hpp"

namespace wavestack {

/// A stacked metasurface: ordered transmissive layers with precomputed
/// free-space operators between them. Values are immutable in spirit;
/// mutation-style operations return new stacks.
///
/// Orientation: fields propagate feed antennas -> layer 0 -> ... -> layer
/// L-1 (the output aperture). When `input_operator` is absent the stack is
/// in identity-excitation mode and the excitation is applied directly to
/// layer 0 (one virtual feed per layer-0 atom).
struct SimStack
{
    std::vector<MetasurfaceLayer> layers;
    double layer_spacing_m = 0.0;
    CarrierSpec carrier;
    std::optional<PlanarGrid> feed_grid;
    std::optional<DiffractionOperator> input_operator;    // feeds -> layer 0
    std::vector<DiffractionOperator> interlayer_operators; // [i]: layer i -> i+1

    int num_layers() const { return static_cast<int>(layers.size()); }
    int num_feeds() const;
    int output_size() const { return layers.back().grid.size(); }
    const PlanarGrid& output_grid() const { return layers.back().grid; }

    void validate() const;

    /// Replaces per-layer phases (wrapped into [0, 2*pi)); shape-checked.
    void set_phases(const std::vector<RealVector>& per_layer_phases);
    std::vector<RealVector> phases() const;
};

/// Uniform stack along +z: optional feed grid at z = 0, layer i centered at
/// z = feed_spacing + i * spacing (or i * spacing in identity-excitation
/// mode). `feed_spacing_m` < 0 means "use spacing_m".
SimStack make_uniform_stack(int num_layers, int rows, int cols, double pitch_m,
                            double spacing_m, const CarrierSpec& carrier,
                            std::optional<PlanarGrid> feed_grid = std::nullopt,
                            double feed_spacing_m = -1.0,
                            const HardwareProfile& profile = HardwareProfile::ht2());

/// Stack from explicit layers (already positioned); builds all operators.
SimStack make_sim_stack(std::vector<MetasurfaceLayer> layers, double layer_spacing_m,
                        const CarrierSpec& carrier,
                        std::optional<PlanarGrid> feed_grid = std::nullopt);

/// End-to-end wave-domain transfer
///   M = Phi_L W_L ... Phi_2 W_2 Phi_1 W_in
/// mapping feed excitations to output-aperture fields (output elements x
/// feeds). Left-multiplication order matches propagation order.
ComplexMatrix transfer_matrix(const SimStack& sim);

/// Receive-orientation map (antennas observed from incident aperture
/// fields): the transpose of transfer_matrix. Fields incident on the output
/// aperture pass through its layer first and exit at the feeds.
ComplexMatrix receive_transfer(const SimStack& sim);

/// Hardware perturbations: wrapped Gaussian phase jitter, multiplicative
/// amplitude error, Gaussian element displacement. Operators are rebuilt iff
/// positions are perturbed.
struct ImperfectionModel
{
    double phase_jitter_std = 0.0;      // radians
    double amplitude_error_std = 0.0;   // relative
    double position_error_std_m = 0.0;  // meters, per coordinate
    std::uint64_t seed = 0;
};

struct PerturbedStack
{
    SimStack sim;
    int amplitude_clamp_count = 0; // draws pushed back into the profile range
};

/// Returns a perturbed copy; the input stack is untouched. Streams: 0 phase,
/// 1 amplitude, 2 position, each consumed layer-major then element-major
/// (positions coordinate-major x,y,z).
PerturbedStack apply_imperfections(const SimStack& sim, const ImperfectionModel& model);

} // namespace wavestack
