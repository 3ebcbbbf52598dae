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

#include "wavestack/sim_stack.hpp"

#include <cmath>
#include <string>

#include "wavestack/errors.hpp"
#include "wavestack/philox.hpp"

namespace wavestack {

int SimStack::num_feeds() const
{
    if (input_operator)
        return input_operator->source_grid.size();
    return layers.front().grid.size();
}

void SimStack::validate() const
{
    if (layers.empty())
        throw validation_error("SimStack: at least one layer required");
    if (!(layer_spacing_m > 0.0))
        throw validation_error("SimStack: layer spacing must be positive");
    carrier.validate();
    for (const auto& layer : layers)
        layer.validate();
    if (static_cast<int>(interlayer_operators.size()) != num_layers() - 1)
        throw dimension_error("SimStack: expected layers-1 interlayer operators");
    for (int i = 0; i + 1 < num_layers(); ++i)
    {
        const auto& op = interlayer_operators[static_cast<std::size_t>(i)];
        if (op.matrix.cols() != layers[static_cast<std::size_t>(i)].grid.size() ||
            op.matrix.rows() != layers[static_cast<std::size_t>(i) + 1].grid.size())
            throw dimension_error("SimStack: interlayer operator " + std::to_string(i) +
                                  " does not match adjacent layers");
    }
    if (input_operator &&
        input_operator->matrix.rows() != layers.front().grid.size())
        throw dimension_error("SimStack: input operator does not match layer 0");
}

void SimStack::set_phases(const std::vector<RealVector>& per_layer_phases)
{
    if (per_layer_phases.size() != layers.size())
        throw dimension_error("SimStack::set_phases: layer count mismatch");
    for (std::size_t l = 0; l < layers.size(); ++l)
    {
        if (per_layer_phases[l].size() != layers[l].grid.size())
            throw dimension_error("SimStack::set_phases: size mismatch at layer " +
                                  std::to_string(l));
        layers[l].phases = per_layer_phases[l].unaryExpr([](double p) { return wrap_phase(p); });
    }
}

std::vector<RealVector> SimStack::phases() const
{
    std::vector<RealVector> out;
    out.reserve(layers.size());
    for (const auto& layer : layers)
        out.push_back(layer.phases);
    return out;
}

SimStack make_uniform_stack(int num_layers, int rows, int cols, double pitch_m,
                            double spacing_m, const CarrierSpec& carrier,
                            std::optional<PlanarGrid> feed_grid, double feed_spacing_m,
                            const HardwareProfile& profile)
{
    if (num_layers < 1)
        throw validation_error("make_uniform_stack: need at least one layer");
    if (!(spacing_m > 0.0))
        throw validation_error("make_uniform_stack: spacing must be positive");
    const double feed_gap = feed_spacing_m > 0.0 ? feed_spacing_m : spacing_m;
    const double z0 = feed_grid ? feed_gap : 0.0;

    std::vector<MetasurfaceLayer> layers;
    layers.reserve(static_cast<std::size_t>(num_layers));
    for (int l = 0; l < num_layers; ++l)
    {
        const Vec3 center(0.0, 0.0, z0 + l * spacing_m);
        layers.push_back(make_uniform_layer(
            make_planar_grid(rows, cols, pitch_m, center, Vec3::UnitZ()), profile));
    }
    return make_sim_stack(std::move(layers), spacing_m, carrier, std::move(feed_grid));
}

SimStack make_sim_stack(std::vector<MetasurfaceLayer> layers, double layer_spacing_m,
                        const CarrierSpec& carrier, std::optional<PlanarGrid> feed_grid)
{
    SimStack sim;
    sim.layers = std::move(layers);
    sim.layer_spacing_m = layer_spacing_m;
    sim.carrier = carrier;
    sim.feed_grid = std::move(feed_grid);
    if (sim.feed_grid)
        sim.input_operator =
            build_interlayer_operator(*sim.feed_grid, sim.layers.front().grid, carrier);
    for (std::size_t l = 0; l + 1 < sim.layers.size(); ++l)
        sim.interlayer_operators.push_back(build_interlayer_operator(
            sim.layers[l].grid, sim.layers[l + 1].grid, carrier));
    sim.validate();
    return sim;
}

ComplexMatrix transfer_matrix(const SimStack& sim)
{
    sim.validate();
    ComplexMatrix m;
    if (sim.input_operator)
        m = sim.layers.front().transmission().asDiagonal() * sim.input_operator->matrix;
    else
        m = sim.layers.front().transmission().asDiagonal();
    for (std::size_t l = 1; l < sim.layers.size(); ++l)
        m = sim.layers[l].transmission().asDiagonal() *
            (sim.interlayer_operators[l - 1].matrix * m);
    return m;
}

ComplexMatrix receive_transfer(const SimStack& sim)
{
    return transfer_matrix(sim).transpose();
}

PerturbedStack apply_imperfections(const SimStack& sim, const ImperfectionModel& model)
{
    if (!(model.phase_jitter_std >= 0.0) || !(model.amplitude_error_std >= 0.0) ||
        !(model.position_error_std_m >= 0.0))
        throw validation_error("apply_imperfections: std deviations must be finite and >= 0");

    PerturbedStack out{sim, 0};

    if (model.phase_jitter_std > 0.0)
    {
        Philox rng(model.seed, 0);
        for (auto& layer : out.sim.layers)
            for (Eigen::Index i = 0; i < layer.phases.size(); ++i)
                layer.phases(i) =
                    wrap_phase(layer.phases(i) + model.phase_jitter_std * rng.next_gaussian());
    }

    if (model.amplitude_error_std > 0.0)
    {
        Philox rng(model.seed, 1);
        for (auto& layer : out.sim.layers)
        {
            double lo = 1.0, hi = 1.0;
            if (!layer.profile.unit_modulus() && layer.profile.amplitude_range)
            {
                lo = layer.profile.amplitude_range->first;
                hi = layer.profile.amplitude_range->second;
            }
            for (Eigen::Index i = 0; i < layer.amplitudes.size(); ++i)
            {
                double a = layer.amplitudes(i) *
                           (1.0 + model.amplitude_error_std * rng.next_gaussian());
                if (a < lo || a > hi)
                {
                    a = std::clamp(a, lo, hi);
                    ++out.amplitude_clamp_count;
                }
                layer.amplitudes(i) = a;
            }
        }
    }

    if (model.position_error_std_m > 0.0)
    {
        Philox rng(model.seed, 2);
        for (auto& layer : out.sim.layers)
            for (auto& pos : layer.grid.element_positions)
                for (int c = 0; c < 3; ++c)
                    pos(c) += model.position_error_std_m * rng.next_gaussian();
        // displaced elements invalidate the cached operators
        if (out.sim.feed_grid)
            out.sim.input_operator = build_interlayer_operator(
                *out.sim.feed_grid, out.sim.layers.front().grid, out.sim.carrier);
        out.sim.interlayer_operators.clear();
        for (std::size_t l = 0; l + 1 < out.sim.layers.size(); ++l)
            out.sim.interlayer_operators.push_back(build_interlayer_operator(
                out.sim.layers[l].grid, out.sim.layers[l + 1].grid, out.sim.carrier));
    }

    return out;
}

} // namespace wavestack
