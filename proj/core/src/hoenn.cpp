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

#include "wavestack/hoenn.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "wavestack/errors.hpp"
#include "wavestack/optimizer.hpp"
#include "wavestack/philox.hpp"

namespace wavestack {

namespace {

/// Receive-orientation sweep x = M^T f, keeping per-layer inputs for the
/// backward pass. Layer indices follow the stack (0 nearest the antennas).
struct ReceiveCascade
{
    std::vector<ComplexMatrix> layer_inputs; // field entering layer l's plane
    std::vector<ComplexVector> transmissions;
    ComplexMatrix readout; // antennas x batch
};

ReceiveCascade receive_forward(const SimStack& sim, const ComplexMatrix& fields)
{
    const int num_layers = sim.num_layers();
    if (fields.rows() != sim.output_size())
        throw dimension_error("receive_forward: field rows != aperture size");

    ReceiveCascade cascade;
    cascade.layer_inputs.resize(static_cast<std::size_t>(num_layers));
    cascade.transmissions.resize(static_cast<std::size_t>(num_layers));
    for (int l = 0; l < num_layers; ++l)
        cascade.transmissions[static_cast<std::size_t>(l)] =
            sim.layers[static_cast<std::size_t>(l)].transmission();

    cascade.layer_inputs[static_cast<std::size_t>(num_layers - 1)] = fields;
    for (int l = num_layers - 1; l > 0; --l)
    {
        const ComplexMatrix through =
            cascade.transmissions[static_cast<std::size_t>(l)].asDiagonal() *
            cascade.layer_inputs[static_cast<std::size_t>(l)];
        cascade.layer_inputs[static_cast<std::size_t>(l - 1)] =
            sim.interlayer_operators[static_cast<std::size_t>(l - 1)].matrix.transpose() *
            through;
    }
    const ComplexMatrix exit =
        cascade.transmissions[0].asDiagonal() * cascade.layer_inputs[0];
    if (sim.input_operator)
        cascade.readout = sim.input_operator->matrix.transpose() * exit;
    else
        cascade.readout = exit;
    return cascade;
}

/// Adjoint of receive_forward: maps dL/d(readout) back to per-layer phase
/// gradients. `g` uses the convention dL = 2 Re <g, d(readout)>.
void receive_backward(const SimStack& sim, const ReceiveCascade& cascade,
                      const ComplexMatrix& g, std::vector<RealVector>* grad_phases)
{
    const int num_layers = sim.num_layers();
    grad_phases->resize(static_cast<std::size_t>(num_layers));

    ComplexMatrix g_out; // gradient at the output of layer l's transmission
    if (sim.input_operator)
        g_out = sim.input_operator->matrix.conjugate() * g;
    else
        g_out = g;

    for (int l = 0; l < num_layers; ++l)
    {
        const ComplexVector& phi = cascade.transmissions[static_cast<std::size_t>(l)];
        const ComplexMatrix& in = cascade.layer_inputs[static_cast<std::size_t>(l)];
        const ComplexVector acc = (in.cwiseProduct(g_out.conjugate())).rowwise().sum();
        (*grad_phases)[static_cast<std::size_t>(l)] =
            -2.0 * phi.cwiseProduct(acc).imag();
        if (l < num_layers - 1)
        {
            const ComplexMatrix g_in =
                phi.conjugate().asDiagonal() * g_out; // through the diagonal
            g_out = sim.interlayer_operators[static_cast<std::size_t>(l)].matrix.conjugate() *
                    g_in;
        }
    }
}

RealMatrix apply_detector(const HoennModel& model, const ComplexMatrix& readout)
{
    RealMatrix d(readout.rows(), readout.cols());
    if (model.detector == DetectorKind::magnitude_squared)
        d = readout.cwiseAbs2() / model.detector_scale;
    else
        d = readout.cwiseAbs() / model.detector_scale;
    return d;
}

RealMatrix softmax_columns(const RealMatrix& logits)
{
    RealMatrix p(logits.rows(), logits.cols());
    for (Eigen::Index b = 0; b < logits.cols(); ++b)
    {
        const double m = logits.col(b).maxCoeff();
        const RealVector e = (logits.col(b).array() - m).exp();
        p.col(b) = e / e.sum();
    }
    return p;
}

} // namespace

void HoennModel::validate() const
{
    onn.validate();
    if (enn_weights.cols() != onn.num_feeds())
        throw dimension_error("HoennModel: dense input dimension must equal the receiving "
                              "array size");
    if (enn_bias.size() != enn_weights.rows())
        throw dimension_error("HoennModel: bias size != class count");
    if (!(detector_scale > 0.0))
        throw validation_error("HoennModel: detector scale must be positive");
}

HoennModel make_hoenn_model(SimStack onn, const AngularGrid& grid, DetectorKind detector,
                            std::uint64_t seed)
{
    HoennModel model;
    model.onn = std::move(onn);
    model.detector = detector;
    const int classes = grid.num_regions();
    const int readout = model.onn.num_feeds();
    Philox rng(Philox::derive_subseed(seed, "enn-init"), 0);
    model.enn_weights.resize(classes, readout);
    for (int r = 0; r < classes; ++r)
        for (int c = 0; c < readout; ++c)
            model.enn_weights(r, c) = 0.01 * rng.next_gaussian();
    model.enn_bias = RealVector::Zero(classes);
    model.validate();
    return model;
}

RealVector detector_outputs(const HoennModel& model, const ComplexVector& field)
{
    const ReceiveCascade cascade = receive_forward(model.onn, field);
    return apply_detector(model, cascade.readout).col(0);
}

RealMatrix hoenn_forward_batch(const HoennModel& model, const ComplexMatrix& fields)
{
    const ReceiveCascade cascade = receive_forward(model.onn, fields);
    const RealMatrix d = apply_detector(model, cascade.readout);
    const RealMatrix logits = (model.enn_weights * d).colwise() + model.enn_bias;
    return softmax_columns(logits);
}

RealVector hoenn_forward(const HoennModel& model, const ComplexVector& field)
{
    return hoenn_forward_batch(model, field).col(0);
}

int hoenn_predict(const HoennModel& model, const ComplexVector& field)
{
    return argmax_power(hoenn_forward(model, field));
}

int argmax_power(const RealVector& powers)
{
    int best = 0;
    for (Eigen::Index i = 1; i < powers.size(); ++i)
        if (powers(i) > powers(best))
            best = static_cast<int>(i);
    return best;
}

double hoenn_loss_and_gradient(const HoennModel& model, const ComplexMatrix& fields,
                               const std::vector<int>& labels,
                               std::vector<RealVector>* grad_phases, RealMatrix* grad_weights,
                               RealVector* grad_bias)
{
    const Eigen::Index batch = fields.cols();
    if (static_cast<Eigen::Index>(labels.size()) != batch)
        throw dimension_error("hoenn_loss_and_gradient: labels/batch mismatch");

    const ReceiveCascade cascade = receive_forward(model.onn, fields);
    const RealMatrix d = apply_detector(model, cascade.readout);
    const RealMatrix logits = (model.enn_weights * d).colwise() + model.enn_bias;

    // stable cross-entropy
    double loss = 0.0;
    RealMatrix probs = softmax_columns(logits);
    for (Eigen::Index b = 0; b < batch; ++b)
    {
        const int y = labels[static_cast<std::size_t>(b)];
        if (y < 0 || y >= model.num_classes())
            throw validation_error("hoenn_loss_and_gradient: label out of range");
        const double m = logits.col(b).maxCoeff();
        const double lse = m + std::log((logits.col(b).array() - m).exp().sum());
        loss += lse - logits(y, b);
    }
    loss /= static_cast<double>(batch);

    if (grad_phases == nullptr && grad_weights == nullptr && grad_bias == nullptr)
        return loss;

    RealMatrix dlogits = probs;
    for (Eigen::Index b = 0; b < batch; ++b)
        dlogits(labels[static_cast<std::size_t>(b)], b) -= 1.0;
    dlogits /= static_cast<double>(batch);

    if (grad_weights != nullptr)
        *grad_weights = dlogits * d.transpose();
    if (grad_bias != nullptr)
        *grad_bias = dlogits.rowwise().sum();

    if (grad_phases != nullptr)
    {
        const RealMatrix gd = model.enn_weights.transpose() * dlogits; // antennas x batch
        ComplexMatrix g_readout(gd.rows(), gd.cols());
        if (model.detector == DetectorKind::magnitude_squared)
        {
            g_readout = gd.cast<Complex>().cwiseProduct(cascade.readout) /
                        model.detector_scale;
        }
        else
        {
            for (Eigen::Index i = 0; i < gd.rows(); ++i)
                for (Eigen::Index b = 0; b < batch; ++b)
                {
                    const double mag = std::abs(cascade.readout(i, b));
                    g_readout(i, b) = mag > 0.0 ? Complex(gd(i, b) / (2.0 * mag *
                                                                      model.detector_scale)) *
                                                      cascade.readout(i, b)
                                                : Complex(0.0, 0.0);
                }
        }
        receive_backward(model.onn, cascade, g_readout, grad_phases);
    }
    return loss;
}

TrainReport train_hoenn(HoennModel& model, const std::vector<DoaSample>& dataset,
                        const TrainConfig& config)
{
    if (dataset.empty())
        throw validation_error("train_hoenn: empty dataset");
    if (config.epochs < 1 || config.batch_size < 1 || !(config.learning_rate >= 0.0))
        throw validation_error("train_hoenn: invalid training configuration");
    model.validate();

    const int aperture = model.aperture_size();
    const int total = static_cast<int>(dataset.size());
    ComplexMatrix fields(aperture, total);
    std::vector<int> labels(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i)
    {
        if (dataset[static_cast<std::size_t>(i)].field.size() != aperture)
            throw dimension_error("train_hoenn: sample field size != aperture");
        fields.col(i) = dataset[static_cast<std::size_t>(i)].field;
        labels[static_cast<std::size_t>(i)] = dataset[static_cast<std::size_t>(i)].label;
    }

    // fixed feature normalization from the initial configuration
    {
        const double saved = model.detector_scale;
        model.detector_scale = 1.0;
        const ReceiveCascade cascade = receive_forward(model.onn, fields);
        const double mean = apply_detector(model, cascade.readout).mean();
        model.detector_scale = mean > 0.0 ? mean : saved;
    }

    const int num_layers = model.onn.num_layers();
    Eigen::Index phase_dim = 0;
    for (const auto& layer : model.onn.layers)
        phase_dim += layer.phases.size();
    const Eigen::Index w_dim = model.enn_weights.size();
    const Eigen::Index b_dim = model.enn_bias.size();

    GradientDescentConfig gd;
    gd.step = config.learning_rate;
    gd.beta1 = config.beta1;
    gd.beta2 = config.beta2;
    gd.cosine_decay = false;
    gd.horizon = 1;
    GradientDescent opt_phases(phase_dim, gd);
    GradientDescent opt_weights(w_dim, gd);
    GradientDescent opt_bias(b_dim, gd);

    const int batches = (total + config.batch_size - 1) / config.batch_size;
    const std::uint64_t shuffle_seed = Philox::derive_subseed(config.seed, "shuffle");
    const std::uint64_t augment_seed = Philox::derive_subseed(config.seed, "augment");

    TrainReport report;
    report.epoch_loss.resize(config.epochs);

    std::vector<int> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < config.epochs; ++epoch)
    {
        Philox shuffle_rng(shuffle_seed, static_cast<std::uint64_t>(epoch));
        for (int i = total - 1; i > 0; --i)
        {
            const int j = static_cast<int>(shuffle_rng.next_double() * (i + 1));
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }

        double epoch_loss = 0.0;
        for (int batch = 0; batch < batches; ++batch)
        {
            const int begin = batch * config.batch_size;
            const int count = std::min(config.batch_size, total - begin);
            ComplexMatrix batch_fields(aperture, count);
            std::vector<int> batch_labels(static_cast<std::size_t>(count));
            for (int i = 0; i < count; ++i)
            {
                const int idx = order[static_cast<std::size_t>(begin + i)];
                batch_fields.col(i) = fields.col(idx);
                batch_labels[static_cast<std::size_t>(i)] =
                    labels[static_cast<std::size_t>(idx)];
            }

            std::vector<RealVector> grad_phases;
            RealMatrix grad_w;
            RealVector grad_b;
            double loss;
            if (config.imperfection_augmentation)
            {
                ImperfectionModel im = *config.imperfection_augmentation;
                im.seed = Philox::derive_subseed(
                    augment_seed,
                    "b" + std::to_string(epoch) + "_" + std::to_string(batch));
                HoennModel jittered = model;
                jittered.onn = apply_imperfections(model.onn, im).sim;
                loss = hoenn_loss_and_gradient(jittered, batch_fields, batch_labels,
                                               config.train_onn ? &grad_phases : nullptr,
                                               config.train_enn ? &grad_w : nullptr,
                                               config.train_enn ? &grad_b : nullptr);
            }
            else
            {
                loss = hoenn_loss_and_gradient(model, batch_fields, batch_labels,
                                               config.train_onn ? &grad_phases : nullptr,
                                               config.train_enn ? &grad_w : nullptr,
                                               config.train_enn ? &grad_b : nullptr);
            }
            if (!std::isfinite(loss))
                throw std::runtime_error("train_hoenn: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(batch));
            epoch_loss += loss * count;

            if (config.train_onn && config.learning_rate > 0.0)
            {
                RealVector flat(phase_dim), flat_grad(phase_dim);
                Eigen::Index off = 0;
                for (int l = 0; l < num_layers; ++l)
                {
                    const auto& p = model.onn.layers[static_cast<std::size_t>(l)].phases;
                    flat.segment(off, p.size()) = p;
                    flat_grad.segment(off, p.size()) = grad_phases[static_cast<std::size_t>(l)];
                    off += p.size();
                }
                opt_phases.update(flat, flat_grad);
                off = 0;
                std::vector<RealVector> new_phases;
                for (int l = 0; l < num_layers; ++l)
                {
                    const Eigen::Index n =
                        model.onn.layers[static_cast<std::size_t>(l)].phases.size();
                    new_phases.push_back(flat.segment(off, n));
                    off += n;
                }
                model.onn.set_phases(new_phases);
            }
            if (config.train_enn && config.learning_rate > 0.0)
            {
                RealVector flat_w =
                    Eigen::Map<RealVector>(model.enn_weights.data(), w_dim);
                RealVector flat_gw = Eigen::Map<RealVector>(grad_w.data(), w_dim);
                opt_weights.update(flat_w, flat_gw);
                model.enn_weights =
                    Eigen::Map<RealMatrix>(flat_w.data(), model.enn_weights.rows(),
                                           model.enn_weights.cols());
                opt_bias.update(model.enn_bias, grad_b);
            }
        }
        report.epoch_loss(epoch) = epoch_loss / total;
    }
    report.final_loss = report.epoch_loss(config.epochs - 1);
    return report;
}

namespace {

ComplexMatrix make_test_batch(const AngularGrid& grid, const PlanarGrid& aperture,
                              const CarrierSpec& carrier, double snr_db, int trials,
                              std::uint64_t stream_base, std::uint64_t subseed,
                              std::vector<int>* labels, std::vector<DoaSample>* samples)
{
    const double az_width = 2.0 * std::numbers::pi / grid.az_bins;
    const double el_width = std::numbers::pi / 2.0 / grid.el_bins;
    const bool noiseless = std::isinf(snr_db);
    const double noise_std = noiseless ? 0.0 : std::sqrt(std::pow(10.0, -snr_db / 10.0));

    ComplexMatrix fields(aperture.size(), trials);
    labels->resize(static_cast<std::size_t>(trials));
    if (samples)
        samples->clear();
    for (int i = 0; i < trials; ++i)
    {
        const int region = i % grid.num_regions();
        const int az_bin = region % grid.az_bins;
        const int el_bin = region / grid.az_bins;
        Philox rng(subseed, stream_base + static_cast<std::uint64_t>(i));
        const double az = (az_bin + rng.next_double()) * az_width;
        const double el = (el_bin + rng.next_double()) * el_width;
        FieldVector field = far_field_steering(aperture, az, el, carrier);
        if (!noiseless)
            for (Eigen::Index n = 0; n < field.size(); ++n)
                field(n) += noise_std * rng.next_cgaussian();
        fields.col(i) = field;
        (*labels)[static_cast<std::size_t>(i)] = region;
        if (samples)
            samples->push_back(DoaSample{field, region, snr_db, az, el});
    }
    return fields;
}

AccuracyPoint summarize(double snr_db, int correct, int trials)
{
    AccuracyPoint point;
    point.snr_db = snr_db;
    point.trials = trials;
    point.accuracy = static_cast<double>(correct) / trials;
    point.stderr_est = std::sqrt(point.accuracy * (1.0 - point.accuracy) / trials);
    return point;
}

} // namespace

std::vector<AccuracyPoint> evaluate_accuracy(const HoennModel& model, const AngularGrid& grid,
                                             const std::vector<double>& snr_db, int trials,
                                             std::uint64_t seed)
{
    if (trials < 1)
        throw validation_error("evaluate_accuracy: trials must be >= 1");
    model.validate();
    if (model.num_classes() != grid.num_regions())
        throw validation_error("evaluate_accuracy: model classes != grid regions");

    const std::uint64_t subseed = Philox::derive_subseed(seed, "eval");
    const PlanarGrid& aperture = model.onn.output_grid();
    std::vector<AccuracyPoint> points;
    for (std::size_t s = 0; s < snr_db.size(); ++s)
    {
        std::vector<int> labels;
        const ComplexMatrix fields =
            make_test_batch(grid, aperture, model.onn.carrier, snr_db[s], trials,
                            static_cast<std::uint64_t>(s) * trials, subseed, &labels, nullptr);
        const RealMatrix probs = hoenn_forward_batch(model, fields);
        int correct = 0;
        for (int i = 0; i < trials; ++i)
            if (argmax_power(probs.col(i)) == labels[static_cast<std::size_t>(i)])
                ++correct;
        points.push_back(summarize(snr_db[s], correct, trials));
    }
    return points;
}

std::vector<AccuracyPoint> evaluate_predictor(const DoaPredictor& predictor,
                                              const AngularGrid& grid,
                                              const PlanarGrid& aperture,
                                              const CarrierSpec& carrier,
                                              const std::vector<double>& snr_db, int trials,
                                              std::uint64_t seed)
{
    if (trials < 1)
        throw validation_error("evaluate_predictor: trials must be >= 1");
    const std::uint64_t subseed = Philox::derive_subseed(seed, "eval");
    std::vector<AccuracyPoint> points;
    for (std::size_t s = 0; s < snr_db.size(); ++s)
    {
        std::vector<int> labels;
        std::vector<DoaSample> samples;
        make_test_batch(grid, aperture, carrier, snr_db[s], trials,
                        static_cast<std::uint64_t>(s) * trials, subseed, &labels, &samples);
        int correct = 0;
        for (int i = 0; i < trials; ++i)
            if (predictor(samples[static_cast<std::size_t>(i)]) ==
                labels[static_cast<std::size_t>(i)])
                ++correct;
        points.push_back(summarize(snr_db[s], correct, trials));
    }
    return points;
}

double posterior_peak_fraction(const HoennModel& model, const AngularGrid& grid,
                               double azimuth_rad, double elevation_rad, double snr_db,
                               int trials, std::uint64_t seed)
{
    if (trials < 1)
        throw validation_error("posterior_peak_fraction: trials must be >= 1");
    const int truth = grid.region_index(azimuth_rad, elevation_rad);
    const PlanarGrid& aperture = model.onn.output_grid();
    const FieldVector steering =
        far_field_steering(aperture, azimuth_rad, elevation_rad, model.onn.carrier);
    const double noise_std =
        std::isinf(snr_db) ? 0.0 : std::sqrt(std::pow(10.0, -snr_db / 10.0));
    const std::uint64_t subseed = Philox::derive_subseed(seed, "posterior-peak");

    ComplexMatrix fields(aperture.size(), trials);
    for (int i = 0; i < trials; ++i)
    {
        Philox rng(subseed, static_cast<std::uint64_t>(i));
        FieldVector field = steering;
        if (noise_std > 0.0)
            for (Eigen::Index n = 0; n < field.size(); ++n)
                field(n) += noise_std * rng.next_cgaussian();
        fields.col(i) = field;
    }
    const RealMatrix probs = hoenn_forward_batch(model, fields);
    int hits = 0;
    for (int i = 0; i < trials; ++i)
        if (argmax_power(probs.col(i)) == truth)
            ++hits;
    return static_cast<double>(hits) / trials;
}

int OnnOnlyClassifier::predict(const ComplexVector& field) const
{
    const RealVector powers = (receive_map * field).cwiseAbs2();
    return argmax_power(powers);
}

OnnOnlyClassifier make_onn_only_classifier(SimStack& sim, const AngularGrid& grid,
                                           const FitConfig& config)
{
    if (sim.num_feeds() != grid.num_regions())
        throw validation_error("make_onn_only_classifier: receiving array size (" +
                               std::to_string(sim.num_feeds()) + ") != region count (" +
                               std::to_string(grid.num_regions()) + ")");

    // target receive map: matched filter per region center
    const PlanarGrid& aperture = sim.output_grid();
    ComplexMatrix target(grid.num_regions(), aperture.size());
    for (int g = 0; g < grid.num_regions(); ++g)
    {
        const auto [az, el] = grid.region_center(g);
        target.row(g) =
            far_field_steering(aperture, az, el, sim.carrier).conjugate().transpose();
    }
    // receive map is transfer^T; fitting M to target^T is the same problem
    fit_transfer(sim, nullptr, target.transpose(), config);

    OnnOnlyClassifier classifier;
    classifier.receive_map = receive_transfer(sim);
    classifier.grid = grid;
    return classifier;
}

void randomize_phases(SimStack& sim, std::uint64_t seed)
{
    const std::uint64_t subseed = Philox::derive_subseed(seed, "random-onn");
    std::vector<RealVector> phases;
    for (std::size_t l = 0; l < sim.layers.size(); ++l)
    {
        Philox rng(subseed, static_cast<std::uint64_t>(l));
        RealVector p(sim.layers[l].grid.size());
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p(i) = rng.next_phase();
        phases.push_back(std::move(p));
    }
    sim.set_phases(phases);
}

MetasurfaceLayer encode_input(const RealMatrix& data, const MetasurfaceLayer& input_layer)
{
    if (data.rows() != input_layer.grid.rows || data.cols() != input_layer.grid.cols)
        throw dimension_error("encode_input: data dimensions must match the layer grid");
    MetasurfaceLayer out = input_layer;
    out.amplitudes = RealVector::Ones(input_layer.grid.size());
    out.phases.resize(input_layer.grid.size());
    for (int r = 0; r < data.rows(); ++r)
        for (int c = 0; c < data.cols(); ++c)
        {
            const double p = data(r, c);
            if (!(p >= 0.0 && p <= 1.0))
                throw validation_error("encode_input: pixel values must lie in [0, 1]");
            out.phases(r * input_layer.grid.cols + c) =
                wrap_phase(2.0 * std::numbers::pi * p);
        }
    return out;
}

} // namespace wavestack
