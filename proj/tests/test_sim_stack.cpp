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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavestack/errors.hpp"
#include "wavestack/philox.hpp"
#include "wavestack/sim_stack.hpp"

using namespace wavestack;
namespace
{
constexpr double kPi = std::numbers::pi;
const CarrierSpec k10GHz = CarrierSpec::from_frequency(10e9);

SimStack stack_with_feed(int layers, int rows, int cols,
                         const HardwareProfile& profile = HardwareProfile::ht2())
{
    const PlanarGrid feed = make_planar_grid(1, 2, 0.015, Vec3::Zero(), Vec3::UnitZ());
    return make_uniform_stack(layers, rows, cols, 0.015, 0.003, k10GHz, feed, -1.0, profile);
}

void set_random_phases(SimStack& sim, std::uint64_t seed)
{
    Philox rng(seed, 0);
    std::vector<RealVector> phases;
    for (const auto& layer : sim.layers)
    {
        RealVector p(layer.grid.size());
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p(i) = rng.next_phase();
        phases.push_back(std::move(p));
    }
    sim.set_phases(phases);
}

} // namespace

TEST_CASE("both published layer spacings are expressible")
{
    CHECK_NOTHROW(make_uniform_stack(2, 2, 2, 0.015, 0.003, k10GHz));  // 3 mm
    CHECK_NOTHROW(make_uniform_stack(2, 2, 2, 0.015, 0.1, k10GHz));    // 0.1 m prototype
}

TEST_CASE("identity layer passes the input operator through untouched")
{
    SimStack sim = stack_with_feed(1, 2, 2);
    const ComplexMatrix m = transfer_matrix(sim);
    CHECK(m == sim.input_operator->matrix);
}

TEST_CASE("zero-amplitude final layer annihilates the transfer")
{
    SimStack sim = stack_with_feed(2, 2, 2, HardwareProfile::ht3(0.0, 1.0));
    sim.layers.back().amplitudes.setZero();
    const ComplexMatrix m = transfer_matrix(sim);
    CHECK(m.norm() == 0.0);
}

TEST_CASE("transfer matches the explicit path-sum oracle")
{
    SimStack sim = stack_with_feed(2, 2, 2);
    set_random_phases(sim, 31);
    const ComplexMatrix m = transfer_matrix(sim);

    const ComplexVector phi1 = sim.layers[0].transmission();
    const ComplexVector phi2 = sim.layers[1].transmission();
    const ComplexMatrix& win = sim.input_operator->matrix;
    const ComplexMatrix& w2 = sim.interlayer_operators[0].matrix;

    // sum over every diffraction path feed -> atom n -> atom m
    for (int out = 0; out < sim.output_size(); ++out)
        for (int feed = 0; feed < sim.num_feeds(); ++feed)
        {
            Complex sum(0.0, 0.0);
            for (int n = 0; n < sim.layers[0].grid.size(); ++n)
                sum += phi2(out) * w2(out, n) * phi1(n) * win(n, feed);
            CHECK(std::abs(m(out, feed) - sum) / std::abs(sum) < 1e-12);
        }
}

TEST_CASE("cascade splits multiplicatively across sub-stacks")
{
    SimStack full = stack_with_feed(4, 3, 3);
    set_random_phases(full, 5);
    const ComplexMatrix m_full = transfer_matrix(full);

    SimStack lower = stack_with_feed(2, 3, 3);
    lower.set_phases({full.layers[0].phases, full.layers[1].phases});

    SimStack upper;
    upper.layers = {full.layers[2], full.layers[3]};
    upper.layer_spacing_m = full.layer_spacing_m;
    upper.carrier = full.carrier;
    upper.interlayer_operators = {full.interlayer_operators[2]};

    const ComplexMatrix bridge =
        build_interlayer_operator(full.layers[1].grid, full.layers[2].grid, k10GHz).matrix;
    const ComplexMatrix m_split =
        transfer_matrix(upper) * (bridge * transfer_matrix(lower));
    CHECK((m_full - m_split).norm() / m_full.norm() < 1e-12);
}

TEST_CASE("unit-modulus layers preserve the field norm exactly")
{
    SimStack sim = stack_with_feed(1, 4, 4);
    set_random_phases(sim, 8);
    Philox rng(2, 0);
    ComplexVector x(sim.layers[0].grid.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = rng.next_cgaussian();
    const ComplexVector y = sim.layers[0].transmission().asDiagonal() * x;
    CHECK(std::abs(y.norm() - x.norm()) < 1e-12 * x.norm());
}

TEST_CASE("single-phase perturbation obeys the operator-norm bound")
{
    SimStack sim = stack_with_feed(2, 3, 3);
    set_random_phases(sim, 13);
    const ComplexMatrix m0 = transfer_matrix(sim);

    double norm_product = 1.0;
    norm_product *= sim.input_operator->matrix.jacobiSvd().singularValues()(0);
    for (const auto& op : sim.interlayer_operators)
        norm_product *= op.matrix.jacobiSvd().singularValues()(0);

    Philox rng(44, 0);
    ComplexVector x(sim.num_feeds());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = rng.next_cgaussian();

    const double eps = 1e-3;
    for (int trial = 0; trial < 5; ++trial)
    {
        SimStack perturbed = sim;
        const int layer = trial % 2;
        const int atom = (trial * 3) % 9;
        auto phases = perturbed.phases();
        phases[static_cast<std::size_t>(layer)](atom) += eps;
        perturbed.set_phases(phases);
        const double change = ((transfer_matrix(perturbed) - m0) * x).norm();
        CHECK(change <= eps * norm_product * x.norm() * (1.0 + 1e-9));
    }
}

TEST_CASE("quantization snaps to the nearest level with the stated tie rule")
{
    const PlanarGrid g = make_planar_grid(1, 3, 0.015, Vec3::Zero(), Vec3::UnitZ());
    MetasurfaceLayer layer = make_uniform_layer(g);
    layer.phases << 0.4 * kPi, kPi / 2.0, 1.5 * kPi;
    const MetasurfaceLayer q = quantize_phases(layer, 1);
    CHECK(q.phases(0) == 0.0);       // 0.4 pi is closer to 0
    CHECK(q.phases(1) == 0.0);       // exact tie resolves to the lower level
    CHECK(q.phases(2) == 0.0);       // 1.5 pi ties between pi and 2 pi == 0
}

TEST_CASE("one-bit quantization lands exactly on {0, pi}")
{
    const PlanarGrid g = make_planar_grid(8, 8, 0.015, Vec3::Zero(), Vec3::UnitZ());
    MetasurfaceLayer layer = make_uniform_layer(g, HardwareProfile::ht2());
    Philox rng(6, 0);
    for (Eigen::Index i = 0; i < layer.phases.size(); ++i)
        layer.phases(i) = rng.next_phase();
    const MetasurfaceLayer q = quantize_phases(layer, 1);
    for (Eigen::Index i = 0; i < q.phases.size(); ++i)
        CHECK((q.phases(i) == 0.0 || q.phases(i) == kPi));
    CHECK(q.profile.phase_bits == 1);
}

TEST_CASE("two-bit quantization error is bounded by pi/4 over a million draws")
{
    Philox rng(123, 0);
    const PlanarGrid g = make_planar_grid(1, 1, 0.015, Vec3::Zero(), Vec3::UnitZ());
    MetasurfaceLayer layer = make_uniform_layer(g);
    double max_err = 0.0;
    for (int i = 0; i < 1'000'000; ++i)
    {
        layer.phases(0) = rng.next_phase();
        const MetasurfaceLayer q = quantize_phases(layer, 2);
        double diff = std::abs(layer.phases(0) - q.phases(0));
        diff = std::min(diff, 2.0 * kPi - diff);
        max_err = std::max(max_err, diff);
    }
    CHECK(max_err <= kPi / 4.0 + 1e-12);
}

TEST_CASE("quantization is idempotent")
{
    const PlanarGrid g = make_planar_grid(4, 4, 0.015, Vec3::Zero(), Vec3::UnitZ());
    MetasurfaceLayer layer = make_uniform_layer(g);
    Philox rng(9, 0);
    for (Eigen::Index i = 0; i < layer.phases.size(); ++i)
        layer.phases(i) = rng.next_phase();
    for (const int bits : {1, 2, 3})
    {
        const MetasurfaceLayer once = quantize_phases(layer, bits);
        const MetasurfaceLayer twice = quantize_phases(once, bits);
        CHECK(once.phases == twice.phases);
    }
}

TEST_CASE("zero imperfection model is the identity perturbation")
{
    SimStack sim = stack_with_feed(2, 3, 3);
    set_random_phases(sim, 77);
    const PerturbedStack p = apply_imperfections(sim, ImperfectionModel{});
    CHECK(p.amplitude_clamp_count == 0);
    CHECK(transfer_matrix(p.sim) == transfer_matrix(sim));
}

TEST_CASE("transfer deviation grows with the phase jitter level")
{
    SimStack sim = stack_with_feed(2, 3, 3);
    set_random_phases(sim, 15);
    const ComplexMatrix m0 = transfer_matrix(sim);

    auto mean_deviation = [&](double std_dev) {
        double acc = 0.0;
        for (int seed = 0; seed < 100; ++seed)
        {
            ImperfectionModel model;
            model.phase_jitter_std = std_dev;
            model.seed = static_cast<std::uint64_t>(seed);
            acc += (transfer_matrix(apply_imperfections(sim, model).sim) - m0).norm();
        }
        return acc / 100.0;
    };
    const double dev1 = mean_deviation(0.01);
    const double dev2 = mean_deviation(0.02);
    CHECK(dev1 > 0.0);
    CHECK(dev2 > dev1);
}

TEST_CASE("position noise rebuilds the operators, zero noise leaves them bit-identical")
{
    SimStack sim = stack_with_feed(2, 3, 3);

    ImperfectionModel phase_only;
    phase_only.phase_jitter_std = 0.05;
    phase_only.seed = 3;
    const PerturbedStack a = apply_imperfections(sim, phase_only);
    CHECK(a.sim.interlayer_operators[0].matrix == sim.interlayer_operators[0].matrix);
    CHECK(a.sim.input_operator->matrix == sim.input_operator->matrix);

    ImperfectionModel position_only;
    position_only.position_error_std_m = 1e-4;
    position_only.seed = 3;
    const PerturbedStack b = apply_imperfections(sim, position_only);
    CHECK(b.sim.interlayer_operators[0].matrix != sim.interlayer_operators[0].matrix);
    CHECK(transfer_matrix(b.sim) != transfer_matrix(sim));
}

TEST_CASE("amplitude noise on passive hardware is clamped back to unit modulus")
{
    SimStack sim = stack_with_feed(1, 3, 3);
    ImperfectionModel model;
    model.amplitude_error_std = 0.1;
    model.seed = 4;
    const PerturbedStack p = apply_imperfections(sim, model);
    CHECK(p.amplitude_clamp_count == sim.layers[0].grid.size());
    for (Eigen::Index i = 0; i < p.sim.layers[0].amplitudes.size(); ++i)
        CHECK(p.sim.layers[0].amplitudes(i) == 1.0);
}

TEST_CASE("active-hardware amplitude noise respects the profile range")
{
    SimStack sim = stack_with_feed(1, 3, 3, HardwareProfile::ht3(0.9, 1.1));
    ImperfectionModel model;
    model.amplitude_error_std = 0.5;
    model.seed = 21;
    const PerturbedStack p = apply_imperfections(sim, model);
    CHECK(p.amplitude_clamp_count > 0);
    for (Eigen::Index i = 0; i < p.sim.layers[0].amplitudes.size(); ++i)
    {
        CHECK(p.sim.layers[0].amplitudes(i) >= 0.9);
        CHECK(p.sim.layers[0].amplitudes(i) <= 1.1);
    }
}

TEST_CASE("imperfections are reproducible per seed and leave the input untouched")
{
    SimStack sim = stack_with_feed(2, 3, 3);
    const ComplexMatrix before = transfer_matrix(sim);
    ImperfectionModel model;
    model.phase_jitter_std = 0.02;
    model.position_error_std_m = 1e-5;
    model.seed = 10;
    const PerturbedStack a = apply_imperfections(sim, model);
    const PerturbedStack b = apply_imperfections(sim, model);
    CHECK(transfer_matrix(a.sim) == transfer_matrix(b.sim));
    CHECK(transfer_matrix(sim) == before);
}

TEST_CASE("ht3 saturation map compresses large amplitudes")
{
    HardwareProfile profile = HardwareProfile::ht3(0.0, 4.0);
    CHECK(apply_saturation(profile, 2.0) == 2.0); // off by default
    profile.saturation_amplitude = 1.0;
    CHECK(apply_saturation(profile, 0.1) == doctest::Approx(0.1).epsilon(1e-2));
    CHECK(apply_saturation(profile, 10.0) < 1.0 + 1e-12);
    const auto [amp_lo, phase_lo] = profile.coupling_curve(0.0);
    const auto [amp_hi, phase_hi] = profile.coupling_curve(1.0);
    CHECK(amp_lo == 0.0);
    CHECK(amp_hi == 4.0);
    CHECK(phase_hi > phase_lo);
}
