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
#include "wavestack/hoenn.hpp"
#include "wavestack/philox.hpp"
#include "wavestack/spectrum.hpp"

using namespace wavestack;
namespace
{
constexpr double kPi = std::numbers::pi;
const CarrierSpec k10GHz = CarrierSpec::from_frequency(10e9);

// receiver stack: antennas (feed grid) behind the metasurface layers
SimStack receiver_stack(int layers, int aperture, int antennas_rows, int antennas_cols,
                        std::uint64_t seed)
{
    const PlanarGrid antennas =
        make_planar_grid(antennas_rows, antennas_cols, 0.015, Vec3::Zero(), Vec3::UnitZ());
    SimStack sim =
        make_uniform_stack(layers, aperture, aperture, 0.015, 0.003, k10GHz, antennas);
    randomize_phases(sim, seed);
    return sim;
}

} // namespace

TEST_CASE("region indexing matches the stated row-major rule")
{
    const AngularGrid grid{8, 8};
    constexpr double deg = kPi / 180.0;
    CHECK(grid.region_index(120.0 * deg, 60.0 * deg) == 42);
    CHECK(grid.region_index(240.0 * deg, 30.0 * deg) == 21);
    CHECK(grid.region_index(0.0, 0.0) == 0);
    CHECK_THROWS_AS(grid.region_index(-0.1, 0.3), validation_error);
    CHECK_THROWS_AS(grid.region_index(0.1, kPi / 2.0), validation_error);

    const auto [az, el] = grid.region_center(42);
    CHECK(grid.region_index(az, el) == 42);
}

TEST_CASE("datasets are balanced and label-consistent")
{
    const AngularGrid grid{4, 4};
    const PlanarGrid aperture = make_planar_grid(4, 4, 0.015, Vec3::Zero(), Vec3::UnitZ());
    const auto samples = generate_doa_dataset(grid, aperture, k10GHz, 3, 10.0, 9);
    REQUIRE(samples.size() == 48);
    std::vector<int> counts(16, 0);
    for (const auto& s : samples)
    {
        ++counts[static_cast<std::size_t>(s.label)];
        CHECK(grid.region_index(s.azimuth_rad, s.elevation_rad) == s.label);
    }
    for (const int c : counts)
        CHECK(c == 3);

    // same seed reproduces bit-identically
    const auto again = generate_doa_dataset(grid, aperture, k10GHz, 3, 10.0, 9);
    CHECK(again[7].field == samples[7].field);
}

TEST_CASE("disabling noise leaves pure unit-modulus steering vectors")
{
    const AngularGrid grid{2, 2};
    const PlanarGrid aperture = make_planar_grid(3, 3, 0.015, Vec3::Zero(), Vec3::UnitZ());
    const auto samples = generate_doa_dataset(
        grid, aperture, k10GHz, 2, std::numeric_limits<double>::infinity(), 3);
    for (const auto& s : samples)
        for (Eigen::Index n = 0; n < s.field.size(); ++n)
            CHECK(std::abs(std::abs(s.field(n)) - 1.0) < 1e-14);
}

TEST_CASE("posteriors are a probability distribution")
{
    const AngularGrid grid{2, 2};
    HoennModel model =
        make_hoenn_model(receiver_stack(2, 5, 2, 2, 4), grid, DetectorKind::magnitude_squared, 7);
    Philox rng(5, 0);
    ComplexVector field(model.aperture_size());
    for (Eigen::Index i = 0; i < field.size(); ++i)
        field(i) = rng.next_cgaussian();
    const RealVector p = hoenn_forward(model, field);
    CHECK(std::abs(p.sum() - 1.0) < 1e-12);
    CHECK(p.minCoeff() >= 0.0);
}

TEST_CASE("zero dense layer gives the uniform posterior")
{
    const AngularGrid grid{2, 2};
    HoennModel model =
        make_hoenn_model(receiver_stack(1, 4, 2, 2, 1), grid, DetectorKind::magnitude_squared, 2);
    model.enn_weights.setZero();
    model.enn_bias.setZero();
    Philox rng(8, 0);
    ComplexVector field(model.aperture_size());
    for (Eigen::Index i = 0; i < field.size(); ++i)
        field(i) = rng.next_cgaussian();
    const RealVector p = hoenn_forward(model, field);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        CHECK(p(i) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("global input phase is invisible, per-element phase is not")
{
    const AngularGrid grid{2, 2};
    HoennModel model =
        make_hoenn_model(receiver_stack(2, 5, 2, 2, 11), grid, DetectorKind::magnitude_squared, 3);
    Philox rng(21, 0);
    ComplexVector field(model.aperture_size());
    for (Eigen::Index i = 0; i < field.size(); ++i)
        field(i) = rng.next_cgaussian();

    const RealVector base = hoenn_forward(model, field);
    const RealVector rotated = hoenn_forward(model, (std::polar(1.0, 0.77) * field).eval());
    CHECK((base - rotated).norm() < 1e-12);

    ComplexVector scrambled = field;
    for (Eigen::Index i = 0; i < scrambled.size(); ++i)
        scrambled(i) *= std::polar(1.0, rng.next_phase());
    const RealVector changed = hoenn_forward(model, scrambled);
    CHECK((base - changed).norm() > 1e-6);
}

TEST_CASE("uniform model cross-entropy equals ln(classes) on any batch")
{
    const AngularGrid grid{2, 2};
    HoennModel model =
        make_hoenn_model(receiver_stack(1, 4, 2, 2, 6), grid, DetectorKind::magnitude_squared, 5);
    model.enn_weights.setZero();
    model.enn_bias.setZero();
    const auto dataset = generate_doa_dataset(model.onn.output_grid().rows == 4
                                                  ? grid
                                                  : grid,
                                              model.onn.output_grid(), k10GHz, 2, 10.0, 4);
    ComplexMatrix fields(model.aperture_size(), dataset.size());
    std::vector<int> labels;
    for (std::size_t i = 0; i < dataset.size(); ++i)
    {
        fields.col(static_cast<Eigen::Index>(i)) = dataset[i].field;
        labels.push_back(dataset[i].label);
    }
    const double loss = hoenn_loss_and_gradient(model, fields, labels, nullptr, nullptr, nullptr);
    CHECK(loss == doctest::Approx(std::log(4.0)).epsilon(1e-9));
}

TEST_CASE("training gradients match central finite differences")
{
    const AngularGrid grid{4, 2}; // 8 classes
    for (int instance = 0; instance < 5; ++instance)
    {
        const std::uint64_t seed = 40 + static_cast<std::uint64_t>(instance);
        HoennModel model = make_hoenn_model(receiver_stack(2, 4, 2, 4, seed), grid,
                                            instance % 2 == 0
                                                ? DetectorKind::magnitude_squared
                                                : DetectorKind::magnitude,
                                            seed);
        model.detector_scale = 0.37; // arbitrary fixed normalization
        const auto dataset = generate_doa_dataset(grid, model.onn.output_grid(), k10GHz, 2,
                                                  15.0, seed + 1);
        ComplexMatrix fields(model.aperture_size(), 6);
        std::vector<int> labels;
        for (int i = 0; i < 6; ++i)
        {
            fields.col(i) = dataset[static_cast<std::size_t>(i * 2)].field;
            labels.push_back(dataset[static_cast<std::size_t>(i * 2)].label);
        }

        std::vector<RealVector> grad_phases;
        RealMatrix grad_w;
        RealVector grad_b;
        hoenn_loss_and_gradient(model, fields, labels, &grad_phases, &grad_w, &grad_b);

        const double h = 1e-6;
        double num = 0.0, den = 0.0;
        Philox pick(seed, 2);
        // phases
        for (int k = 0; k < 6; ++k)
        {
            const int layer = static_cast<int>(pick.next_double() * 2);
            const int atom = static_cast<int>(pick.next_double() * 16);
            HoennModel plus = model, minus = model;
            plus.onn.layers[static_cast<std::size_t>(layer)].phases(atom) += h;
            minus.onn.layers[static_cast<std::size_t>(layer)].phases(atom) -= h;
            const double fd =
                (hoenn_loss_and_gradient(plus, fields, labels, nullptr, nullptr, nullptr) -
                 hoenn_loss_and_gradient(minus, fields, labels, nullptr, nullptr, nullptr)) /
                (2.0 * h);
            const double an = grad_phases[static_cast<std::size_t>(layer)](atom);
            num += (an - fd) * (an - fd);
            den += fd * fd;
        }
        // dense weights and bias
        for (int k = 0; k < 4; ++k)
        {
            const int r = static_cast<int>(pick.next_double() * 8);
            const int c = static_cast<int>(pick.next_double() * 8);
            HoennModel plus = model, minus = model;
            plus.enn_weights(r, c) += h;
            minus.enn_weights(r, c) -= h;
            const double fd =
                (hoenn_loss_and_gradient(plus, fields, labels, nullptr, nullptr, nullptr) -
                 hoenn_loss_and_gradient(minus, fields, labels, nullptr, nullptr, nullptr)) /
                (2.0 * h);
            num += (grad_w(r, c) - fd) * (grad_w(r, c) - fd);
            den += fd * fd;
        }
        {
            HoennModel plus = model, minus = model;
            plus.enn_bias(3) += h;
            minus.enn_bias(3) -= h;
            const double fd =
                (hoenn_loss_and_gradient(plus, fields, labels, nullptr, nullptr, nullptr) -
                 hoenn_loss_and_gradient(minus, fields, labels, nullptr, nullptr, nullptr)) /
                (2.0 * h);
            num += (grad_b(3) - fd) * (grad_b(3) - fd);
            den += fd * fd;
        }
        CHECK(std::sqrt(num / den) < 1e-5);
    }
}

TEST_CASE("frozen-stack training solves a separable problem")
{
    // one distinct noiseless field per class (region centers) is linearly
    // separable after the detector, so dense-only training must converge
    const AngularGrid grid{2, 2};
    HoennModel model =
        make_hoenn_model(receiver_stack(1, 5, 2, 2, 31), grid, DetectorKind::magnitude_squared, 9);
    std::vector<DoaSample> dataset;
    for (int g = 0; g < grid.num_regions(); ++g)
    {
        const auto [az, el] = grid.region_center(g);
        const FieldVector field = far_field_steering(model.onn.output_grid(), az, el, k10GHz);
        for (int copy = 0; copy < 16; ++copy)
            dataset.push_back(DoaSample{field, g, 100.0, az, el});
    }

    TrainConfig config;
    config.learning_rate = 0.05;
    config.epochs = 120;
    config.batch_size = 16;
    config.seed = 12;
    config.train_onn = false;
    const TrainReport report = train_hoenn(model, dataset, config);
    CHECK(report.final_loss < 0.1 * report.epoch_loss(0));
}

TEST_CASE("zero learning rate leaves the model untouched")
{
    const AngularGrid grid{2, 2};
    HoennModel model =
        make_hoenn_model(receiver_stack(1, 4, 2, 2, 3), grid, DetectorKind::magnitude_squared, 8);
    const RealMatrix w0 = model.enn_weights;
    const auto phases0 = model.onn.phases();
    const auto dataset =
        generate_doa_dataset(grid, model.onn.output_grid(), k10GHz, 4, 10.0, 5);

    TrainConfig config;
    config.learning_rate = 0.0;
    config.epochs = 3;
    config.batch_size = 8;
    const TrainReport report = train_hoenn(model, dataset, config);
    CHECK(model.enn_weights == w0);
    CHECK(model.onn.phases()[0] == phases0[0]);
    for (Eigen::Index e = 1; e < report.epoch_loss.size(); ++e)
        CHECK(report.epoch_loss(e) == doctest::Approx(report.epoch_loss(0)).epsilon(1e-12));
}

TEST_CASE("joint training reaches at least the dense-only loss on average")
{
    const AngularGrid grid{2, 2};
    double joint = 0.0, dense_only = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed)
    {
        const auto base_stack = receiver_stack(2, 5, 2, 2, 100 + seed);
        const auto dataset = generate_doa_dataset(
            grid, base_stack.output_grid(), k10GHz, 12, 10.0, 200 + seed);
        TrainConfig config;
        config.learning_rate = 0.02;
        config.epochs = 40;
        config.batch_size = 16;
        config.seed = seed;

        HoennModel a = make_hoenn_model(base_stack, grid, DetectorKind::magnitude_squared, seed);
        joint += train_hoenn(a, dataset, config).final_loss;

        HoennModel b = make_hoenn_model(base_stack, grid, DetectorKind::magnitude_squared, seed);
        TrainConfig frozen = config;
        frozen.train_onn = false;
        dense_only += train_hoenn(b, dataset, frozen).final_loss;
    }
    CHECK(joint / 3.0 <= dense_only / 3.0);
}

TEST_CASE("training is bit-deterministic given seed, config and data")
{
    const AngularGrid grid{2, 2};
    const auto stack = receiver_stack(2, 4, 2, 2, 55);
    const auto dataset = generate_doa_dataset(grid, stack.output_grid(), k10GHz, 8, 10.0, 56);
    TrainConfig config;
    config.epochs = 5;
    config.batch_size = 8;
    config.seed = 77;

    HoennModel a = make_hoenn_model(stack, grid, DetectorKind::magnitude_squared, 77);
    HoennModel b = make_hoenn_model(stack, grid, DetectorKind::magnitude_squared, 77);
    train_hoenn(a, dataset, config);
    train_hoenn(b, dataset, config);
    CHECK(a.enn_weights == b.enn_weights);
    CHECK(a.enn_bias == b.enn_bias);
    CHECK(a.onn.phases()[0] == b.onn.phases()[0]);
    CHECK(a.onn.phases()[1] == b.onn.phases()[1]);
}

TEST_CASE("imperfection-augmented training stays deterministic and finite")
{
    const AngularGrid grid{2, 2};
    const auto stack = receiver_stack(1, 4, 2, 2, 5);
    const auto dataset = generate_doa_dataset(grid, stack.output_grid(), k10GHz, 8, 10.0, 6);
    TrainConfig config;
    config.epochs = 3;
    config.batch_size = 8;
    config.seed = 9;
    ImperfectionModel augmentation;
    augmentation.phase_jitter_std = 0.05;
    config.imperfection_augmentation = augmentation;

    HoennModel a = make_hoenn_model(stack, grid, DetectorKind::magnitude_squared, 9);
    HoennModel b = make_hoenn_model(stack, grid, DetectorKind::magnitude_squared, 9);
    const TrainReport ra = train_hoenn(a, dataset, config);
    train_hoenn(b, dataset, config);
    CHECK(a.enn_weights == b.enn_weights);
    CHECK(ra.epoch_loss.allFinite());
}

TEST_CASE("oracle predictor scores perfect accuracy, uniform model scores chance")
{
    const AngularGrid grid{4, 4};
    const PlanarGrid aperture = make_planar_grid(5, 5, 0.015, Vec3::Zero(), Vec3::UnitZ());
    const auto oracle = [](const DoaSample& s) { return s.label; };
    for (const auto& point :
         evaluate_predictor(oracle, grid, aperture, k10GHz, {0.0, 10.0}, 160, 3))
        CHECK(point.accuracy == 1.0);

    HoennModel model =
        make_hoenn_model(receiver_stack(1, 5, 4, 4, 2), grid, DetectorKind::magnitude_squared, 2);
    model.enn_weights.setZero();
    model.enn_bias.setZero();
    for (const auto& point : evaluate_accuracy(model, grid, {10.0}, 1600, 4))
    {
        const double chance = 1.0 / 16.0;
        CHECK(std::abs(point.accuracy - chance) <
              3.0 * std::sqrt(chance * (1.0 - chance) / point.trials));
    }
}

TEST_CASE("argmax tie resolves to the lowest index")
{
    RealVector powers(4);
    powers << 1.0, 1.0, 1.0, 1.0;
    CHECK(argmax_power(powers) == 0);
    powers << 0.0, 2.0, 2.0, 0.0;
    CHECK(argmax_power(powers) == 1);
}

TEST_CASE("ideal matched-filter receive map classifies noiselessly")
{
    const AngularGrid grid{4, 4};
    const PlanarGrid aperture = make_planar_grid(8, 8, 0.015, Vec3::Zero(), Vec3::UnitZ());
    OnnOnlyClassifier classifier;
    classifier.grid = grid;
    classifier.receive_map.resize(grid.num_regions(), aperture.size());
    for (int g = 0; g < grid.num_regions(); ++g)
    {
        const auto [az, el] = grid.region_center(g);
        classifier.receive_map.row(g) =
            far_field_steering(aperture, az, el, k10GHz).conjugate().transpose();
    }
    for (int g = 0; g < grid.num_regions(); ++g)
    {
        const auto [az, el] = grid.region_center(g);
        CHECK(classifier.predict(far_field_steering(aperture, az, el, k10GHz)) == g);
    }
}

TEST_CASE("onn-only construction requires antennas to cover the regions")
{
    const AngularGrid grid{4, 4};
    SimStack sim = receiver_stack(1, 5, 2, 2, 3); // 4 antennas, 16 regions
    FitConfig config;
    config.iterations = 1;
    CHECK_THROWS_AS(make_onn_only_classifier(sim, grid, config), validation_error);
}

TEST_CASE("random phase initialization is seed-reproducible")
{
    SimStack a = receiver_stack(2, 4, 2, 2, 0);
    SimStack b = receiver_stack(2, 4, 2, 2, 0);
    randomize_phases(a, 5);
    randomize_phases(b, 5);
    CHECK(a.phases()[0] == b.phases()[0]);
    CHECK(a.phases()[1] == b.phases()[1]);
    randomize_phases(b, 6);
    CHECK(a.phases()[0] != b.phases()[0]);
}

TEST_CASE("image encoding maps pixel values onto phases")
{
    const PlanarGrid g = make_planar_grid(2, 2, 0.015, Vec3::Zero(), Vec3::UnitZ());
    const MetasurfaceLayer layer = make_uniform_layer(g);

    RealMatrix zeros = RealMatrix::Zero(2, 2);
    const MetasurfaceLayer encoded0 = encode_input(zeros, layer);
    CHECK(encoded0.phases.norm() == 0.0);
    CHECK(encoded0.amplitudes == RealVector::Ones(4));

    RealMatrix half = RealMatrix::Constant(2, 2, 0.5);
    const MetasurfaceLayer encoded_half = encode_input(half, layer);
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(encoded_half.phases(i) == doctest::Approx(kPi).epsilon(1e-15));

    RealMatrix checker(2, 2);
    checker << 0.0, 0.5, 0.5, 0.0;
    const MetasurfaceLayer board = encode_input(checker, layer);
    CHECK(board.phases(0) == 0.0);
    CHECK(board.phases(1) == doctest::Approx(kPi));
    CHECK(board.phases(2) == doctest::Approx(kPi));
    CHECK(board.phases(3) == 0.0);
    // a two-level image is a valid 1-bit configuration
    const MetasurfaceLayer quantized = quantize_phases(board, 1);
    CHECK(quantized.phases == board.phases);

    RealMatrix bad(2, 2);
    bad << 0.0, 0.5, 1.5, 0.0;
    CHECK_THROWS_AS(encode_input(bad, layer), validation_error);
    CHECK_THROWS_AS(encode_input(RealMatrix::Zero(3, 2), layer), dimension_error);
}

TEST_CASE("dft matrices and correlation behave canonically")
{
    CHECK(dft_matrix(1)(0, 0) == Complex(1.0, 0.0));
    const ComplexMatrix f2 = dft_matrix(2);
    CHECK(std::abs(f2(1, 1) - Complex(-1.0, 0.0)) < 1e-15);

    const ComplexMatrix f2d = dft_matrix_2d(4, 4);
    CHECK(f2d.rows() == 16);
    // symmetric kronecker structure
    CHECK(std::abs(f2d(1, 2) - f2d(2, 1)) < 1e-14);
    CHECK(matrix_correlation(f2d, f2d) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(matrix_correlation(f2d, (std::polar(1.0, 0.3) * f2d).eval()) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boresight plane wave peaks at the zero-frequency bin")
{
    const ComplexMatrix f2d = dft_matrix_2d(4, 4);
    const RealVector spectrum = angular_power_spectrum(f2d, ComplexVector::Ones(16));
    CHECK(argmax_power(spectrum) == 0);
    CHECK(spectrum(0) == doctest::Approx(256.0).epsilon(1e-12));
    for (int i = 1; i < 16; ++i)
        CHECK(spectrum(i) < 1e-18);
}

TEST_CASE("one-by-one dft fit is exact")
{
    const PlanarGrid feed = make_planar_grid(1, 1, 0.015, Vec3::Zero(), Vec3::UnitZ());
    SimStack sim = make_uniform_stack(1, 1, 1, 0.015, 0.003, k10GHz, feed);
    FitConfig config;
    config.iterations = 100;
    config.restarts = 1;
    const SpectrumFit fit = fit_dft_spectrum(sim, 1, 1, config);
    CHECK(fit.correlation == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two-by-two dft fit aligns the transfer with the target")
{
    // lambda/3 plane separation: 3 mm coupling is nearly diagonal and cannot
    // realize the mixing a DFT needs
    std::vector<MetasurfaceLayer> layers;
    for (int l = 0; l < 3; ++l)
    {
        const bool last = l == 2;
        layers.push_back(make_uniform_layer(make_planar_grid(
            last ? 2 : 4, last ? 2 : 4, 0.015, Vec3(0, 0, (l + 1) * 0.01), Vec3::UnitZ())));
    }
    const PlanarGrid feed = make_planar_grid(2, 2, 0.015, Vec3::Zero(), Vec3::UnitZ());
    SimStack sim = make_sim_stack(std::move(layers), 0.01, k10GHz, feed);

    FitConfig config;
    config.iterations = 800;
    config.restarts = 3;
    config.seed = 3;
    const SpectrumFit fit = fit_dft_spectrum(sim, 2, 2, config);
    CHECK(fit.correlation >= 0.9);
}
