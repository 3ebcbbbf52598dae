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
#include <functional>
#include <optional>
#include <vector>

#include "wavestack/beamforming.hpp"
#include "wavestack/doa.hpp"
#include "wavestack/sim_stack.hpp"

namespace wavestack {

/// What the receiving antennas observe: envelope (|x|) or energy (|x|^2).
/// Either way the electronic stage sees real magnitudes only; phase
/// information survives solely through the ONN's wave-domain processing.
enum class DetectorKind
{
    magnitude,
    magnitude_squared,
};

/// Hybrid optical-electronic network: a receiver-side SIM preprocesses the
/// incident field in the wave domain, energy detectors read the antenna
/// magnitudes, and a single dense electronic layer classifies.
///
/// The ONN stack is held in receive orientation: its feed grid is the
/// receiving antenna array and its last layer is the input aperture exposed
/// to the incident wave, so the antenna observation is
/// receive_transfer(onn) * field.
struct HoennModel
{
    SimStack onn;
    DetectorKind detector = DetectorKind::magnitude_squared;
    RealMatrix enn_weights; // classes x readout antennas
    RealVector enn_bias;    // classes
    /// Fixed feature normalization: detector outputs are divided by this
    /// before the dense layer. Set once at training start from the initial
    /// configuration and stored with the checkpoint.
    double detector_scale = 1.0;

    int num_classes() const { return static_cast<int>(enn_weights.rows()); }
    int readout_size() const { return static_cast<int>(enn_weights.cols()); }
    int aperture_size() const { return onn.output_size(); }

    void validate() const;
};

/// Fresh model: raw ONN phases kept, dense weights ~ N(0, 0.01^2) from
/// Philox(subseed(seed, "enn-init"), stream 0) row-major, zero bias.
HoennModel make_hoenn_model(SimStack onn, const AngularGrid& grid, DetectorKind detector,
                            std::uint64_t seed);

/// Scaled detector outputs for one incident field.
RealVector detector_outputs(const HoennModel& model, const ComplexVector& field);

/// Class posterior (softmax); sums to one.
RealVector hoenn_forward(const HoennModel& model, const ComplexVector& field);

/// Column-wise posteriors for a batch of fields (aperture x batch).
RealMatrix hoenn_forward_batch(const HoennModel& model, const ComplexMatrix& fields);

int hoenn_predict(const HoennModel& model, const ComplexVector& field);

/// Mean cross-entropy over a batch plus analytic gradients (ONN phases via
/// the complex chain rule through the cascade and detector; dense weights
/// and bias directly). Null gradient pointers skip the backward pass.
double hoenn_loss_and_gradient(const HoennModel& model, const ComplexMatrix& fields,
                               const std::vector<int>& labels,
                               std::vector<RealVector>* grad_phases, RealMatrix* grad_weights,
                               RealVector* grad_bias);

struct TrainConfig
{
    double learning_rate = 0.01;
    int epochs = 50;
    int batch_size = 64;
    std::uint64_t seed = 0;
    double train_snr_db = 10.0; // recorded with checkpoints
    std::optional<ImperfectionModel> imperfection_augmentation;
    bool train_onn = true;
    bool train_enn = true;
    double beta1 = 0.9;
    double beta2 = 0.999;
};

struct TrainReport
{
    RealVector epoch_loss; // mean training cross-entropy per epoch
    double final_loss = 0.0;
};

/// Joint mini-batch training of ONN phases and dense layer (per-parameter
/// adaptive steps, fixed batch order per seed, deterministic). Shuffling:
/// Fisher-Yates driven by Philox(subseed(seed, "shuffle"), stream = epoch).
/// Throws on non-finite loss, naming the offending epoch/batch.
TrainReport train_hoenn(HoennModel& model, const std::vector<DoaSample>& dataset,
                        const TrainConfig& config);

struct AccuracyPoint
{
    double snr_db = 0.0;
    double accuracy = 0.0;
    double stderr_est = 0.0; // binomial standard error
    int trials = 0;
};

/// Fresh balanced test samples per SNR point (region = trial % regions,
/// per-trial Philox streams under subseed(seed, "eval")).
std::vector<AccuracyPoint> evaluate_accuracy(const HoennModel& model, const AngularGrid& grid,
                                             const std::vector<double>& snr_db, int trials,
                                             std::uint64_t seed);

/// Same evaluation harness for an arbitrary predictor (used for baselines
/// and oracles in tests).
using DoaPredictor = std::function<int(const DoaSample&)>;
std::vector<AccuracyPoint> evaluate_predictor(const DoaPredictor& predictor,
                                              const AngularGrid& grid,
                                              const PlanarGrid& aperture,
                                              const CarrierSpec& carrier,
                                              const std::vector<double>& snr_db, int trials,
                                              std::uint64_t seed);

/// Fraction of noisy trials at a fixed source direction whose posterior
/// argmax lands in the true region.
double posterior_peak_fraction(const HoennModel& model, const AngularGrid& grid,
                               double azimuth_rad, double elevation_rad, double snr_db,
                               int trials, std::uint64_t seed);

/// Lowest-index argmax (the documented tie rule).
int argmax_power(const RealVector& powers);

/// Wave-domain-only baseline: antenna k is assigned to region k (both
/// row-major); prediction is the region of the strongest antenna.
struct OnnOnlyClassifier
{
    ComplexMatrix receive_map; // regions x aperture
    AngularGrid grid;

    int predict(const ComplexVector& field) const;
};

/// Fits the stack so its receive map approximates the bank of matched
/// filters (conjugated steering vectors of the region centers); requires
/// feeds == regions. The fitted phases are left in `sim`.
OnnOnlyClassifier make_onn_only_classifier(SimStack& sim, const AngularGrid& grid,
                                           const FitConfig& config);

/// Independent uniform phases on every layer, from Philox(subseed(seed,
/// "random-onn"), stream = layer).
void randomize_phases(SimStack& sim, std::uint64_t seed);

/// Phase-encodes an image (values in [0, 1]) onto a layer: p -> phase
/// 2*pi*p, unit amplitude. Data dimensions must equal the layer grid's.
MetasurfaceLayer encode_input(const RealMatrix& data, const MetasurfaceLayer& input_layer);

} // namespace wavestack
