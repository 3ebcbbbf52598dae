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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wavestack {

/// Declarative experiment descriptions consumed by the CLI. Parsing is
/// strict: unknown keys are rejected, all defaults are resolved at parse
/// time, and the resolved document round-trips through JSON unchanged. Every
/// run emits a manifest listing the resolved scenario, its content hash and
/// a checksum per output file.

enum class ScenarioKind
{
    beamfocus,
    doa_train,
    doa_eval,
    spectrum,
    channel_est,
    rayleigh,
};

std::string kind_to_string(ScenarioKind kind);
ScenarioKind kind_from_string(const std::string& name);

/// Stack-plus-feed geometry shared by the experiment kinds. A pitch of 0
/// resolves to lambda/2; feed spacing of 0 resolves to the layer spacing.
struct SimGeometryConfig
{
    int rows = 15;
    int cols = 15;
    double pitch_m = 0.0;
    int num_layers = 7;
    double layer_spacing_m = 0.003;
    double frequency_hz = 10e9;
    int feed_rows = 2;
    int feed_cols = 2;
    double feed_pitch_m = 0.0;
    double feed_spacing_m = 0.0;
};

struct OptimizerConfig
{
    double step = 0.1;
    int iterations = 2000;
    int restarts = 5;
};

struct BeamfocusConfig
{
    // feed defaults resolve to a 2x2 array at 2*lambda pitch, one wavelength
    // behind layer 0, so every feed illuminates the full aperture
    SimGeometryConfig geometry;
    std::vector<int> layer_counts = {1, 2, 4, 7};
    int num_users = 4;
    double first_user_distance_m = 1.5;
    double user_spacing_m = 1.5;
    // large enough that served users are interference- rather than
    // noise-limited under the unit-variance receiver noise convention
    double total_power = 1e16;
    std::string channel_mode = "near_field_los";
    double pathloss = 1.0;
    OptimizerConfig optimizer;
    bool emit_maps = true;
    double map_extent_x_m = 2.0;
    double map_extent_z_m = 7.0;
    int map_nx = 41;
    int map_nz = 71;
};

struct DoaConfig
{
    int az_bins = 8;
    int el_bins = 8;
    SimGeometryConfig receiver; // feeds are the receiving antenna array
    std::string detector = "magnitude_squared";
    int train_samples_per_region = 64;
    double train_snr_db = 10.0;
    double learning_rate = 0.01;
    int epochs = 50;
    int batch_size = 64;
    std::vector<double> eval_snr_db = {-10, -5, 0, 5, 10, 15, 20};
    int eval_trials = 1920;
    int num_seeds = 3;
    OptimizerConfig onn_fit;
    std::string checkpoint_dir; // doa_eval: directory with trained checkpoints
};

struct SpectrumConfig
{
    int dft_rows = 4;
    int dft_cols = 4;
    int num_layers = 6;
    int hidden_rows = 8;
    int hidden_cols = 8;
    double pitch_m = 0.0;
    // wider than the beamfocus default: adjacent-plane coupling at 3 mm is
    // nearly diagonal, while the DFT fit needs inter-atom mixing
    double layer_spacing_m = 0.01;
    double frequency_hz = 10e9;
    OptimizerConfig optimizer;
};

struct ChannelEstConfig
{
    SimGeometryConfig geometry;
    int num_users = 1;
    int slots = 0; // 0 resolves to exactly unknowns / feeds
    std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30};
    int trials = 50;
    double pathloss = 1.0;
};

struct RayleighConfig
{
    double aperture_m = 0.5;
    double frequency_hz = 28e9;
};

struct Scenario
{
    std::string name;
    ScenarioKind kind = ScenarioKind::rayleigh;
    std::uint64_t seed = 1;
    std::string output_dir; // optional; flag and environment can override

    BeamfocusConfig beamfocus;
    DoaConfig doa;
    SpectrumConfig spectrum;
    ChannelEstConfig channel_est;
    RayleighConfig rayleigh;
};

/// Strict parse + default resolution. Throws validation_error on unknown
/// keys, type mismatches or out-of-range values.
Scenario scenario_from_json(const std::string& text);

/// Canonical resolved form (stable key order, round-trip-exact numbers).
std::string scenario_to_json(const Scenario& scenario);

/// FNV-1a over the canonical form minus the output directory, which does
/// not influence the numbers.
std::uint64_t scenario_hash(const Scenario& scenario);

struct RunOptions
{
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
};

struct RunResult
{
    std::filesystem::path output_dir;
    std::vector<std::filesystem::path> outputs; // relative to output_dir
    std::filesystem::path manifest;
};

/// Executes a scenario and writes its outputs plus manifest.json. Output
/// directory precedence: options.output_dir, scenario.output_dir,
/// $WAVESTACK_OUT/<name>, ./out/<name>.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

} // namespace wavestack
