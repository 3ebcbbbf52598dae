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

#include "wavestack/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <set>

#include "wavestack/beamforming.hpp"
#include "wavestack/csv.hpp"
#include "wavestack/errors.hpp"
#include "wavestack/hash.hpp"
#include "wavestack/hoenn.hpp"
#include "wavestack/philox.hpp"
#include "wavestack/pilots.hpp"
#include "wavestack/serialize.hpp"
#include "wavestack/spectrum.hpp"
#include "wavestack/version.hpp"
#include "wavestack/zf.hpp"

namespace wavestack {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- parsing

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx)
{
    if (!j.is_object())
        throw validation_error("config: '" + ctx + "' must be an object");
    for (const auto& item : j.items())
        if (!allowed.contains(item.key()))
            throw validation_error("config: unknown key '" + item.key() + "' in " + ctx);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception& e)
    {
        throw validation_error(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

SimGeometryConfig parse_geometry(const json& j, const SimGeometryConfig& defaults,
                                 const std::string& ctx)
{
    check_keys(j,
               {"rows", "cols", "pitch_m", "num_layers", "layer_spacing_m", "frequency_hz",
                "feed_rows", "feed_cols", "feed_pitch_m", "feed_spacing_m"},
               ctx);
    SimGeometryConfig g = defaults;
    g.rows = get_or(j, "rows", g.rows);
    g.cols = get_or(j, "cols", g.cols);
    g.pitch_m = get_or(j, "pitch_m", g.pitch_m);
    g.num_layers = get_or(j, "num_layers", g.num_layers);
    g.layer_spacing_m = get_or(j, "layer_spacing_m", g.layer_spacing_m);
    g.frequency_hz = get_or(j, "frequency_hz", g.frequency_hz);
    g.feed_rows = get_or(j, "feed_rows", g.feed_rows);
    g.feed_cols = get_or(j, "feed_cols", g.feed_cols);
    g.feed_pitch_m = get_or(j, "feed_pitch_m", g.feed_pitch_m);
    g.feed_spacing_m = get_or(j, "feed_spacing_m", g.feed_spacing_m);
    return g;
}

void resolve_geometry(SimGeometryConfig& g)
{
    const CarrierSpec carrier = CarrierSpec::from_frequency(g.frequency_hz);
    if (g.pitch_m <= 0.0)
        g.pitch_m = carrier.wavelength_m / 2.0;
    if (g.feed_pitch_m <= 0.0)
        g.feed_pitch_m = carrier.wavelength_m / 2.0;
    if (g.feed_spacing_m <= 0.0)
        g.feed_spacing_m = g.layer_spacing_m;
    if (g.rows < 1 || g.cols < 1 || g.num_layers < 1 || g.feed_rows < 1 || g.feed_cols < 1)
        throw validation_error("config: geometry dimensions must be >= 1");
    if (!(g.layer_spacing_m > 0.0))
        throw validation_error("config: layer spacing must be positive");
}

json geometry_to_json(const SimGeometryConfig& g)
{
    return json{{"rows", g.rows},
                {"cols", g.cols},
                {"pitch_m", g.pitch_m},
                {"num_layers", g.num_layers},
                {"layer_spacing_m", g.layer_spacing_m},
                {"frequency_hz", g.frequency_hz},
                {"feed_rows", g.feed_rows},
                {"feed_cols", g.feed_cols},
                {"feed_pitch_m", g.feed_pitch_m},
                {"feed_spacing_m", g.feed_spacing_m}};
}

OptimizerConfig parse_optimizer(const json& j, const OptimizerConfig& defaults,
                                const std::string& ctx)
{
    check_keys(j, {"step", "iterations", "restarts"}, ctx);
    OptimizerConfig o = defaults;
    o.step = get_or(j, "step", o.step);
    o.iterations = get_or(j, "iterations", o.iterations);
    o.restarts = get_or(j, "restarts", o.restarts);
    if (!(o.step > 0.0) || o.iterations < 1 || o.restarts < 1)
        throw validation_error("config: optimizer values out of range in " + ctx);
    return o;
}

json optimizer_to_json(const OptimizerConfig& o)
{
    return json{{"step", o.step}, {"iterations", o.iterations}, {"restarts", o.restarts}};
}

} // namespace

std::string kind_to_string(ScenarioKind kind)
{
    switch (kind)
    {
    case ScenarioKind::beamfocus: return "beamfocus";
    case ScenarioKind::doa_train: return "doa_train";
    case ScenarioKind::doa_eval: return "doa_eval";
    case ScenarioKind::spectrum: return "spectrum";
    case ScenarioKind::channel_est: return "channel_est";
    case ScenarioKind::rayleigh: return "rayleigh";
    }
    return "rayleigh";
}

ScenarioKind kind_from_string(const std::string& name)
{
    if (name == "beamfocus")
        return ScenarioKind::beamfocus;
    if (name == "doa_train")
        return ScenarioKind::doa_train;
    if (name == "doa_eval")
        return ScenarioKind::doa_eval;
    if (name == "spectrum")
        return ScenarioKind::spectrum;
    if (name == "channel_est")
        return ScenarioKind::channel_est;
    if (name == "rayleigh")
        return ScenarioKind::rayleigh;
    throw validation_error("config: unknown scenario kind '" + name + "'");
}

Scenario scenario_from_json(const std::string& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::exception& e)
    {
        throw validation_error(std::string("config: invalid JSON: ") + e.what());
    }

    check_keys(j,
               {"name", "kind", "seed", "output_dir", "beamfocus", "doa", "spectrum",
                "channel_est", "rayleigh"},
               "scenario");
    Scenario s;
    if (!j.contains("name") || !j.contains("kind"))
        throw validation_error("config: 'name' and 'kind' are required");
    s.name = j.at("name").get<std::string>();
    if (s.name.empty())
        throw validation_error("config: 'name' must not be empty");
    s.kind = kind_from_string(j.at("kind").get<std::string>());
    s.seed = get_or<std::uint64_t>(j, "seed", 1);
    s.output_dir = get_or<std::string>(j, "output_dir", "");

    const char* section = nullptr;
    switch (s.kind)
    {
    case ScenarioKind::beamfocus: section = "beamfocus"; break;
    case ScenarioKind::doa_train:
    case ScenarioKind::doa_eval: section = "doa"; break;
    case ScenarioKind::spectrum: section = "spectrum"; break;
    case ScenarioKind::channel_est: section = "channel_est"; break;
    case ScenarioKind::rayleigh: section = "rayleigh"; break;
    }
    for (const char* other : {"beamfocus", "doa", "spectrum", "channel_est", "rayleigh"})
        if (j.contains(other) && std::string(other) != section)
            throw validation_error(std::string("config: section '") + other +
                                   "' does not belong to kind " + kind_to_string(s.kind));

    const json empty = json::object();
    const json& body = j.contains(section) ? j.at(section) : empty;

    switch (s.kind)
    {
    case ScenarioKind::beamfocus:
    {
        check_keys(body,
                   {"geometry", "layer_counts", "num_users", "first_user_distance_m",
                    "user_spacing_m", "total_power", "channel_mode", "pathloss", "optimizer",
                    "emit_maps", "map_extent_x_m", "map_extent_z_m", "map_nx", "map_nz"},
                   "beamfocus");
        BeamfocusConfig& c = s.beamfocus;
        if (body.contains("geometry"))
            c.geometry = parse_geometry(body.at("geometry"), c.geometry, "beamfocus.geometry");
        {
            const double lambda =
                CarrierSpec::from_frequency(c.geometry.frequency_hz).wavelength_m;
            if (c.geometry.feed_pitch_m <= 0.0)
                c.geometry.feed_pitch_m = 2.0 * lambda;
            if (c.geometry.feed_spacing_m <= 0.0)
                c.geometry.feed_spacing_m = lambda;
        }
        c.layer_counts = get_or(body, "layer_counts", c.layer_counts);
        c.num_users = get_or(body, "num_users", c.num_users);
        c.first_user_distance_m = get_or(body, "first_user_distance_m", c.first_user_distance_m);
        c.user_spacing_m = get_or(body, "user_spacing_m", c.user_spacing_m);
        c.total_power = get_or(body, "total_power", c.total_power);
        c.channel_mode = get_or(body, "channel_mode", c.channel_mode);
        c.pathloss = get_or(body, "pathloss", c.pathloss);
        if (body.contains("optimizer"))
            c.optimizer = parse_optimizer(body.at("optimizer"), c.optimizer,
                                          "beamfocus.optimizer");
        c.emit_maps = get_or(body, "emit_maps", c.emit_maps);
        c.map_extent_x_m = get_or(body, "map_extent_x_m", c.map_extent_x_m);
        c.map_extent_z_m = get_or(body, "map_extent_z_m", c.map_extent_z_m);
        c.map_nx = get_or(body, "map_nx", c.map_nx);
        c.map_nz = get_or(body, "map_nz", c.map_nz);

        resolve_geometry(c.geometry);
        if (c.layer_counts.empty())
            throw validation_error("config: beamfocus.layer_counts must not be empty");
        for (const int l : c.layer_counts)
            if (l < 1)
                throw validation_error("config: beamfocus.layer_counts entries must be >= 1");
        if (c.num_users < 1)
            throw validation_error("config: beamfocus.num_users must be >= 1");
        if (c.num_users > c.geometry.feed_rows * c.geometry.feed_cols)
            throw validation_error("config: beamfocus needs feeds >= users");
        if (!(c.total_power > 0.0))
            throw validation_error("config: beamfocus.total_power must be positive");
        if (c.channel_mode != "near_field_los" && c.channel_mode != "correlated_rayleigh")
            throw validation_error("config: beamfocus.channel_mode must be near_field_los or "
                                   "correlated_rayleigh");
        break;
    }
    case ScenarioKind::doa_train:
    case ScenarioKind::doa_eval:
    {
        check_keys(body,
                   {"az_bins", "el_bins", "receiver", "detector", "train_samples_per_region",
                    "train_snr_db", "learning_rate", "epochs", "batch_size", "eval_snr_db",
                    "eval_trials", "num_seeds", "onn_fit", "checkpoint_dir"},
                   "doa");
        DoaConfig& c = s.doa;
        c.receiver.rows = 15;
        c.receiver.cols = 15;
        c.receiver.num_layers = 2;
        c.receiver.feed_rows = 8;
        c.receiver.feed_cols = 8;
        // lambda/3 plane separation: the receive cascade needs inter-atom
        // mixing, which vanishes at the 3 mm transmit-side default
        c.receiver.layer_spacing_m = 0.01;
        c.az_bins = get_or(body, "az_bins", c.az_bins);
        c.el_bins = get_or(body, "el_bins", c.el_bins);
        if (body.contains("receiver"))
            c.receiver = parse_geometry(body.at("receiver"), c.receiver, "doa.receiver");
        c.detector = get_or(body, "detector", c.detector);
        c.train_samples_per_region = get_or(body, "train_samples_per_region",
                                            c.train_samples_per_region);
        c.train_snr_db = get_or(body, "train_snr_db", c.train_snr_db);
        c.learning_rate = get_or(body, "learning_rate", c.learning_rate);
        c.epochs = get_or(body, "epochs", c.epochs);
        c.batch_size = get_or(body, "batch_size", c.batch_size);
        c.eval_snr_db = get_or(body, "eval_snr_db", c.eval_snr_db);
        c.eval_trials = get_or(body, "eval_trials", c.eval_trials);
        c.num_seeds = get_or(body, "num_seeds", c.num_seeds);
        c.onn_fit.iterations = 1000;
        if (body.contains("onn_fit"))
            c.onn_fit = parse_optimizer(body.at("onn_fit"), c.onn_fit, "doa.onn_fit");
        c.checkpoint_dir = get_or(body, "checkpoint_dir", c.checkpoint_dir);

        resolve_geometry(c.receiver);
        if (c.az_bins < 1 || c.el_bins < 1)
            throw validation_error("config: doa bins must be >= 1");
        if (c.receiver.feed_rows * c.receiver.feed_cols != c.az_bins * c.el_bins)
            throw validation_error("config: receiving array size must equal the region count");
        if (c.detector != "magnitude_squared" && c.detector != "magnitude")
            throw validation_error("config: doa.detector must be magnitude_squared or magnitude");
        if (c.train_samples_per_region < 1 || c.epochs < 1 || c.batch_size < 1)
            throw validation_error("config: doa training sizes must be >= 1");
        if (c.eval_trials < 1)
            throw validation_error("config: doa.eval_trials must be >= 1");
        if (c.eval_snr_db.empty())
            throw validation_error("config: doa.eval_snr_db must not be empty");
        if (c.num_seeds < 1)
            throw validation_error("config: doa.num_seeds must be >= 1");
        if (s.kind == ScenarioKind::doa_eval && c.checkpoint_dir.empty())
            throw validation_error("config: doa_eval requires checkpoint_dir");
        break;
    }
    case ScenarioKind::spectrum:
    {
        check_keys(body,
                   {"dft_rows", "dft_cols", "num_layers", "hidden_rows", "hidden_cols",
                    "pitch_m", "layer_spacing_m", "frequency_hz", "optimizer"},
                   "spectrum");
        SpectrumConfig& c = s.spectrum;
        c.dft_rows = get_or(body, "dft_rows", c.dft_rows);
        c.dft_cols = get_or(body, "dft_cols", c.dft_cols);
        c.num_layers = get_or(body, "num_layers", c.num_layers);
        c.hidden_rows = get_or(body, "hidden_rows", c.hidden_rows);
        c.hidden_cols = get_or(body, "hidden_cols", c.hidden_cols);
        c.pitch_m = get_or(body, "pitch_m", c.pitch_m);
        c.layer_spacing_m = get_or(body, "layer_spacing_m", c.layer_spacing_m);
        c.frequency_hz = get_or(body, "frequency_hz", c.frequency_hz);
        if (body.contains("optimizer"))
            c.optimizer = parse_optimizer(body.at("optimizer"), c.optimizer,
                                          "spectrum.optimizer");
        if (c.dft_rows < 1 || c.dft_cols < 1 || c.num_layers < 1 || c.hidden_rows < 1 ||
            c.hidden_cols < 1)
            throw validation_error("config: spectrum dimensions must be >= 1");
        if (c.pitch_m <= 0.0)
            c.pitch_m = CarrierSpec::from_frequency(c.frequency_hz).wavelength_m / 2.0;
        break;
    }
    case ScenarioKind::channel_est:
    {
        check_keys(body, {"geometry", "num_users", "slots", "snr_db", "trials", "pathloss"},
                   "channel_est");
        ChannelEstConfig& c = s.channel_est;
        c.geometry.rows = 8;
        c.geometry.cols = 8;
        c.geometry.num_layers = 2;
        if (body.contains("geometry"))
            c.geometry = parse_geometry(body.at("geometry"), c.geometry,
                                        "channel_est.geometry");
        c.num_users = get_or(body, "num_users", c.num_users);
        c.slots = get_or(body, "slots", c.slots);
        c.snr_db = get_or(body, "snr_db", c.snr_db);
        c.trials = get_or(body, "trials", c.trials);
        c.pathloss = get_or(body, "pathloss", c.pathloss);

        resolve_geometry(c.geometry);
        if (c.num_users < 1)
            throw validation_error("config: channel_est.num_users must be >= 1");
        if (c.trials < 1)
            throw validation_error("config: channel_est.trials must be >= 1");
        const int unknowns = c.geometry.rows * c.geometry.cols * c.num_users;
        const int feeds = c.geometry.feed_rows * c.geometry.feed_cols;
        if (c.slots <= 0)
            c.slots = (unknowns + feeds - 1) / feeds;
        if (c.pathloss < 0.0)
            throw validation_error("config: channel_est.pathloss must be >= 0");
        break;
    }
    case ScenarioKind::rayleigh:
    {
        check_keys(body, {"aperture_m", "frequency_hz"}, "rayleigh");
        RayleighConfig& c = s.rayleigh;
        c.aperture_m = get_or(body, "aperture_m", c.aperture_m);
        c.frequency_hz = get_or(body, "frequency_hz", c.frequency_hz);
        if (!(c.aperture_m > 0.0) || !(c.frequency_hz > 0.0))
            throw validation_error("config: rayleigh aperture and frequency must be positive");
        break;
    }
    }
    return s;
}

std::string scenario_to_json(const Scenario& s)
{
    json body;
    switch (s.kind)
    {
    case ScenarioKind::beamfocus:
    {
        const BeamfocusConfig& c = s.beamfocus;
        body = json{{"geometry", geometry_to_json(c.geometry)},
                    {"layer_counts", c.layer_counts},
                    {"num_users", c.num_users},
                    {"first_user_distance_m", c.first_user_distance_m},
                    {"user_spacing_m", c.user_spacing_m},
                    {"total_power", c.total_power},
                    {"channel_mode", c.channel_mode},
                    {"pathloss", c.pathloss},
                    {"optimizer", optimizer_to_json(c.optimizer)},
                    {"emit_maps", c.emit_maps},
                    {"map_extent_x_m", c.map_extent_x_m},
                    {"map_extent_z_m", c.map_extent_z_m},
                    {"map_nx", c.map_nx},
                    {"map_nz", c.map_nz}};
        break;
    }
    case ScenarioKind::doa_train:
    case ScenarioKind::doa_eval:
    {
        const DoaConfig& c = s.doa;
        body = json{{"az_bins", c.az_bins},
                    {"el_bins", c.el_bins},
                    {"receiver", geometry_to_json(c.receiver)},
                    {"detector", c.detector},
                    {"train_samples_per_region", c.train_samples_per_region},
                    {"train_snr_db", c.train_snr_db},
                    {"learning_rate", c.learning_rate},
                    {"epochs", c.epochs},
                    {"batch_size", c.batch_size},
                    {"eval_snr_db", c.eval_snr_db},
                    {"eval_trials", c.eval_trials},
                    {"num_seeds", c.num_seeds},
                    {"onn_fit", optimizer_to_json(c.onn_fit)},
                    {"checkpoint_dir", c.checkpoint_dir}};
        break;
    }
    case ScenarioKind::spectrum:
    {
        const SpectrumConfig& c = s.spectrum;
        body = json{{"dft_rows", c.dft_rows},
                    {"dft_cols", c.dft_cols},
                    {"num_layers", c.num_layers},
                    {"hidden_rows", c.hidden_rows},
                    {"hidden_cols", c.hidden_cols},
                    {"pitch_m", c.pitch_m},
                    {"layer_spacing_m", c.layer_spacing_m},
                    {"frequency_hz", c.frequency_hz},
                    {"optimizer", optimizer_to_json(c.optimizer)}};
        break;
    }
    case ScenarioKind::channel_est:
    {
        const ChannelEstConfig& c = s.channel_est;
        body = json{{"geometry", geometry_to_json(c.geometry)},
                    {"num_users", c.num_users},
                    {"slots", c.slots},
                    {"snr_db", c.snr_db},
                    {"trials", c.trials},
                    {"pathloss", c.pathloss}};
        break;
    }
    case ScenarioKind::rayleigh:
    {
        const RayleighConfig& c = s.rayleigh;
        body = json{{"aperture_m", c.aperture_m}, {"frequency_hz", c.frequency_hz}};
        break;
    }
    }

    const char* section = nullptr;
    switch (s.kind)
    {
    case ScenarioKind::beamfocus: section = "beamfocus"; break;
    case ScenarioKind::doa_train:
    case ScenarioKind::doa_eval: section = "doa"; break;
    case ScenarioKind::spectrum: section = "spectrum"; break;
    case ScenarioKind::channel_est: section = "channel_est"; break;
    case ScenarioKind::rayleigh: section = "rayleigh"; break;
    }

    json j{{"name", s.name},
           {"kind", kind_to_string(s.kind)},
           {"seed", s.seed},
           {"output_dir", s.output_dir}};
    j[section] = body;
    return j.dump(2);
}

std::uint64_t scenario_hash(const Scenario& scenario)
{
    Scenario stripped = scenario;
    stripped.output_dir.clear();
    return fnv1a64(scenario_to_json(stripped));
}

// ---------------------------------------------------------------- running

namespace {

struct OutputCollector
{
    fs::path dir;
    std::vector<fs::path> files;

    void write(const std::string& name, const std::string& content)
    {
        write_file_atomic(dir / name, content);
        files.push_back(name);
    }
};

fs::path resolve_output_dir(const Scenario& scenario, const RunOptions& options)
{
    if (options.output_dir && !options.output_dir->empty())
        return *options.output_dir;
    if (!scenario.output_dir.empty())
        return scenario.output_dir;
    if (const char* root = std::getenv("WAVESTACK_OUT"); root != nullptr && *root != '\0')
        return fs::path(root) / scenario.name;
    return fs::path("out") / scenario.name;
}

SimStack build_stack(const SimGeometryConfig& g, int num_layers)
{
    const CarrierSpec carrier = CarrierSpec::from_frequency(g.frequency_hz);
    const PlanarGrid feed = make_planar_grid(g.feed_rows, g.feed_cols, g.feed_pitch_m,
                                             Vec3::Zero(), Vec3::UnitZ());
    return make_uniform_stack(num_layers, g.rows, g.cols, g.pitch_m, g.layer_spacing_m,
                              carrier, feed, g.feed_spacing_m);
}

void run_rayleigh(const Scenario& s, const RunOptions&, OutputCollector& out)
{
    const RayleighConfig& c = s.rayleigh;
    const CarrierSpec carrier = CarrierSpec::from_frequency(c.frequency_hz);
    const double distance = rayleigh_distance(c.aperture_m, carrier);

    CsvDocument csv({"aperture_m", "frequency_hz", "wavelength_m", "rayleigh_distance_m"});
    const double row[4] = {c.aperture_m, c.frequency_hz, carrier.wavelength_m, distance};
    csv.add_row(row);
    out.write("rayleigh.csv", csv.render());
    std::printf("rayleigh_distance(%g m, %g Hz) = %.4f m\n", c.aperture_m, c.frequency_hz,
                distance);
}

void run_channel_est(const Scenario& s, const RunOptions&, OutputCollector& out)
{
    const ChannelEstConfig& c = s.channel_est;
    SimStack sim = build_stack(c.geometry, c.geometry.num_layers);
    const std::uint64_t seed = s.seed;

    const PilotBook book =
        make_pilot_book(sim, c.num_users, c.slots, Philox::derive_subseed(seed, "pilots"));
    const ComplexMatrix truth =
        sample_correlated_rayleigh(sim.output_grid(), c.num_users, c.pathloss,
                                   Philox::derive_subseed(seed, "channel"), sim.carrier)
            .matrix.transpose();

    // noiseless observations, slot by slot
    const ComplexMatrix sensing = stacked_sensing_matrix(sim, book);
    const int feeds = sim.num_feeds();
    const ComplexVector clean =
        sensing * Eigen::Map<const ComplexVector>(truth.data(), truth.size());
    ComplexMatrix observations(feeds, c.slots);
    for (int t = 0; t < c.slots; ++t)
        observations.col(t) = clean.segment(static_cast<Eigen::Index>(t) * feeds, feeds);

    const ChannelEstimate noiseless = ls_channel_estimate(observations, book, sim, &truth);
    const double rel_error = std::sqrt(noiseless.nmse);

    // NMSE sweep
    const double mean_signal_power = clean.squaredNorm() / static_cast<double>(clean.size());
    const std::uint64_t noise_seed = Philox::derive_subseed(seed, "noise");
    CsvDocument sweep({"snr_db", "nmse", "trials"});
    std::vector<double> log_nmse;
    for (std::size_t i = 0; i < c.snr_db.size(); ++i)
    {
        const double sigma2 = mean_signal_power / std::pow(10.0, c.snr_db[i] / 10.0);
        const double sigma = std::sqrt(sigma2);
        double nmse_sum = 0.0;
        for (int trial = 0; trial < c.trials; ++trial)
        {
            Philox rng(noise_seed, static_cast<std::uint64_t>(i) * c.trials + trial);
            ComplexMatrix noisy = observations;
            for (int t = 0; t < c.slots; ++t)
                for (int m = 0; m < feeds; ++m)
                    noisy(m, t) += sigma * rng.next_cgaussian();
            nmse_sum += ls_channel_estimate(noisy, book, sim, &truth).nmse;
        }
        const double nmse = nmse_sum / c.trials;
        const double row[3] = {c.snr_db[i], nmse, static_cast<double>(c.trials)};
        sweep.add_row(row);
        log_nmse.push_back(std::log10(nmse));
    }
    out.write("nmse_vs_snr.csv", sweep.render());

    // least-squares slope in decades per 10 dB
    double slope = 0.0;
    if (c.snr_db.size() >= 2)
    {
        const auto n = static_cast<double>(c.snr_db.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < c.snr_db.size(); ++i)
        {
            const double x = c.snr_db[i] / 10.0;
            sx += x;
            sy += log_nmse[i];
            sxx += x * x;
            sxy += x * log_nmse[i];
        }
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    CsvDocument summary({"noiseless_rel_error", "slots", "unknowns", "observations",
                         "slope_decades_per_10db"});
    const double row[5] = {rel_error, static_cast<double>(c.slots),
                           static_cast<double>(sim.output_size() * c.num_users),
                           static_cast<double>(c.slots * feeds), slope};
    summary.add_row(row);
    out.write("channel_est_summary.csv", summary.render());
    std::printf("channel_est: noiseless rel error %.3e, slope %.3f decades/10dB\n", rel_error,
                slope);
}

void run_spectrum(const Scenario& s, const RunOptions& options, OutputCollector& out)
{
    const SpectrumConfig& c = s.spectrum;
    const CarrierSpec carrier = CarrierSpec::from_frequency(c.frequency_hz);

    std::vector<MetasurfaceLayer> layers;
    for (int l = 0; l < c.num_layers; ++l)
    {
        const bool last = l == c.num_layers - 1;
        const Vec3 center(0.0, 0.0, (l + 1) * c.layer_spacing_m);
        layers.push_back(make_uniform_layer(
            make_planar_grid(last ? c.dft_rows : c.hidden_rows,
                             last ? c.dft_cols : c.hidden_cols, c.pitch_m, center,
                             Vec3::UnitZ())));
    }
    const PlanarGrid feed =
        make_planar_grid(c.dft_rows, c.dft_cols, c.pitch_m, Vec3::Zero(), Vec3::UnitZ());
    SimStack sim = make_sim_stack(std::move(layers), c.layer_spacing_m, carrier, feed);

    FitConfig fit_config;
    fit_config.step = c.optimizer.step;
    fit_config.iterations = c.optimizer.iterations;
    fit_config.restarts = c.optimizer.restarts;
    fit_config.seed = s.seed;
    fit_config.jobs = options.jobs;
    const SpectrumFit fit = fit_dft_spectrum(sim, c.dft_rows, c.dft_cols, fit_config);

    CsvDocument summary({"correlation", "final_loss", "iterations"});
    const double row[3] = {fit.correlation, fit.report.final_loss,
                           static_cast<double>(fit.report.iterations)};
    summary.add_row(row);
    out.write("spectrum_fit.csv", summary.render());

    const ComplexVector boresight = ComplexVector::Ones(sim.num_feeds());
    const RealVector spectrum = angular_power_spectrum(sim, boresight);
    CsvDocument bins({"bin", "power"});
    for (Eigen::Index i = 0; i < spectrum.size(); ++i)
    {
        const double r[2] = {static_cast<double>(i), spectrum(i)};
        bins.add_row(r);
    }
    out.write("boresight_spectrum.csv", bins.render());
    out.write("fitted_sim.json", sim_to_json(sim));
    std::printf("spectrum: correlation %.4f (loss %.4e)\n", fit.correlation,
                fit.report.final_loss);
}

void run_beamfocus(const Scenario& s, const RunOptions& options, OutputCollector& out)
{
    const BeamfocusConfig& c = s.beamfocus;
    const CarrierSpec carrier = CarrierSpec::from_frequency(c.geometry.frequency_hz);

    std::vector<std::string> summary_header = {"layer_count", "final_loss",
                                               "mean_restart_loss", "leakage"};
    for (int u = 0; u < c.num_users; ++u)
        summary_header.push_back("sinr_db_user" + std::to_string(u));
    CsvDocument summary(summary_header);

    // digital ZF reference on an equally sized aperture
    {
        const PlanarGrid aperture = make_planar_grid(c.geometry.rows, c.geometry.cols,
                                                     c.geometry.pitch_m, Vec3::Zero(),
                                                     Vec3::UnitZ());
        ComplexMatrix h(c.num_users, aperture.size());
        std::vector<Vec3> users;
        for (int u = 0; u < c.num_users; ++u)
            users.emplace_back(0.0, 0.0, c.first_user_distance_m + u * c.user_spacing_m);
        for (int u = 0; u < c.num_users; ++u)
            h.row(u) =
                near_field_response(aperture, users[static_cast<std::size_t>(u)], carrier)
                    .transpose();
        const ComplexMatrix precoder = zf_precoder(h, c.total_power);
        const ComplexMatrix product = h * precoder;
        CsvDocument zf_csv({"user", "received_power", "sinr_db"});
        for (int u = 0; u < c.num_users; ++u)
        {
            const double signal = std::norm(product(u, u));
            double interference = 0.0;
            for (int v = 0; v < c.num_users; ++v)
                if (v != u)
                    interference += std::norm(product(u, v));
            const double row[3] = {static_cast<double>(u), signal,
                                   10.0 * std::log10(signal / (interference + 1.0))};
            zf_csv.add_row(row);
        }
        out.write("zf_summary.csv", zf_csv.render());
        if (c.emit_maps)
        {
            const Vec3 origin(0.0, 0.0, 0.05 + c.map_extent_z_m / 2.0);
            const SamplingPlane plane =
                make_sampling_plane(origin, Vec3::UnitX(), Vec3::UnitZ(), c.map_extent_x_m,
                                    c.map_extent_z_m, c.map_nx, c.map_nz);
            for (int u = 0; u < c.num_users; ++u)
                out.write("zf_map_user" + std::to_string(u) + ".csv",
                          matrix_csv(array_power_map(aperture, plane, precoder.col(u), carrier))
                              .render());
        }
    }

    for (const int layer_count : c.layer_counts)
    {
        BeamScenario scenario;
        scenario.sim = build_stack(c.geometry, layer_count);
        const double z_out = scenario.sim.output_grid().center.z();
        for (int u = 0; u < c.num_users; ++u)
            scenario.user_positions.emplace_back(
                0.0, 0.0, z_out + c.first_user_distance_m + u * c.user_spacing_m);
        scenario.total_power = c.total_power;
        scenario.channel_mode = c.channel_mode == "near_field_los"
                                    ? ChannelMode::near_field_los
                                    : ChannelMode::correlated_rayleigh;
        scenario.pathloss = c.pathloss;
        scenario.channel_seed = Philox::derive_subseed(s.seed, "beam-channel");

        FitConfig fit_config;
        fit_config.step = c.optimizer.step;
        fit_config.iterations = c.optimizer.iterations;
        fit_config.restarts = c.optimizer.restarts;
        fit_config.seed = Philox::derive_subseed(s.seed, "beam-L" + std::to_string(layer_count));
        fit_config.jobs = options.jobs;

        const ComplexMatrix target =
            ComplexMatrix::Identity(c.num_users, scenario.sim.num_feeds());
        const FitReport report = fit_sim_phases(scenario, target, fit_config);

        std::vector<double> row = {static_cast<double>(layer_count), report.final_loss, 0.0,
                                   report.leakage};
        double mean_loss = 0.0;
        for (const double l : report.restart_losses)
            mean_loss += l;
        row[2] = mean_loss / static_cast<double>(report.restart_losses.size());
        for (int u = 0; u < c.num_users; ++u)
            row.push_back(report.per_user_sinr_db(u));
        summary.add_row(row);

        CsvDocument trace({"iteration", "loss"});
        for (Eigen::Index i = 0; i < report.loss_trace.size(); ++i)
        {
            const double r[2] = {static_cast<double>(i), report.loss_trace(i)};
            trace.add_row(r);
        }
        out.write("fit_trace_L" + std::to_string(layer_count) + ".csv", trace.render());
        out.write("fitted_sim_L" + std::to_string(layer_count) + ".json",
                  sim_to_json(scenario.sim));

        if (c.emit_maps)
        {
            const Vec3 origin(0.0, 0.0, z_out + 0.05 + c.map_extent_z_m / 2.0);
            const SamplingPlane plane =
                make_sampling_plane(origin, Vec3::UnitX(), Vec3::UnitZ(), c.map_extent_x_m,
                                    c.map_extent_z_m, c.map_nx, c.map_nz);
            const double feed_amp =
                std::sqrt(c.total_power / scenario.sim.num_feeds());
            for (int u = 0; u < c.num_users; ++u)
            {
                ComplexVector weights = ComplexVector::Zero(scenario.sim.num_feeds());
                weights(u) = feed_amp;
                out.write("beam_map_L" + std::to_string(layer_count) + "_user" +
                              std::to_string(u) + ".csv",
                          matrix_csv(beam_power_map(scenario.sim, plane, weights)).render());
            }
        }
        std::printf("beamfocus L=%d: loss %.4e, leakage %.4f\n", layer_count,
                    report.final_loss, report.leakage);
    }
    out.write("summary.csv", summary.render());
}

struct DoaArtifacts
{
    std::vector<HoennModel> hoenn;      // one per seed
    std::vector<HoennModel> random_enn; // one per seed
    SimStack onn_only_sim;
    bool onn_only_ready = false;
};

void accuracy_csv(OutputCollector& out, const std::string& name,
                  const std::vector<double>& snr_db,
                  const std::vector<std::vector<AccuracyPoint>>& per_seed)
{
    CsvDocument csv({"snr_db", "accuracy", "stderr", "n"});
    for (std::size_t i = 0; i < snr_db.size(); ++i)
    {
        double acc = 0.0;
        int n = 0;
        for (const auto& points : per_seed)
        {
            acc += points[i].accuracy * points[i].trials;
            n += points[i].trials;
        }
        acc /= n;
        const double row[4] = {snr_db[i], acc, std::sqrt(acc * (1.0 - acc) / n),
                               static_cast<double>(n)};
        csv.add_row(row);
    }
    out.write(name, csv.render());
}

std::vector<double> mean_accuracy(const std::vector<double>& snr_db,
                                  const std::vector<std::vector<AccuracyPoint>>& per_seed)
{
    std::vector<double> mean(snr_db.size(), 0.0);
    for (std::size_t i = 0; i < snr_db.size(); ++i)
    {
        for (const auto& points : per_seed)
            mean[i] += points[i].accuracy;
        mean[i] /= static_cast<double>(per_seed.size());
    }
    return mean;
}

void run_doa(const Scenario& s, const RunOptions& options, OutputCollector& out)
{
    const DoaConfig& c = s.doa;
    const AngularGrid grid{c.az_bins, c.el_bins};
    const DetectorKind detector = c.detector == "magnitude_squared"
                                      ? DetectorKind::magnitude_squared
                                      : DetectorKind::magnitude;
    const std::uint64_t run_seed = s.seed;
    const std::uint64_t eval_seed = Philox::derive_subseed(run_seed, "doa-eval-harness");
    const std::uint64_t config_hash = scenario_hash(s);

    DoaArtifacts artifacts;

    if (s.kind == ScenarioKind::doa_train)
    {
        for (int i = 0; i < c.num_seeds; ++i)
        {
            const std::uint64_t seed_i =
                Philox::derive_subseed(run_seed, "doa-seed-" + std::to_string(i));
            const std::vector<DoaSample> dataset = generate_doa_dataset(
                grid, build_stack(c.receiver, c.receiver.num_layers).output_grid(),
                CarrierSpec::from_frequency(c.receiver.frequency_hz),
                c.train_samples_per_region, c.train_snr_db,
                Philox::derive_subseed(seed_i, "train-data"));

            TrainConfig train_config;
            train_config.learning_rate = c.learning_rate;
            train_config.epochs = c.epochs;
            train_config.batch_size = c.batch_size;
            train_config.seed = seed_i;
            train_config.train_snr_db = c.train_snr_db;

            // jointly trained HOENN
            {
                SimStack onn = build_stack(c.receiver, c.receiver.num_layers);
                randomize_phases(onn, Philox::derive_subseed(seed_i, "hoenn-init"));
                HoennModel model = make_hoenn_model(std::move(onn), grid, detector, seed_i);
                train_hoenn(model, dataset, train_config);
                out.write("checkpoint_hoenn_seed" + std::to_string(i) + ".json",
                          model_to_json(model, config_hash));
                artifacts.hoenn.push_back(std::move(model));
            }
            // frozen random SIM, trained dense layer only
            {
                SimStack onn = build_stack(c.receiver, c.receiver.num_layers);
                randomize_phases(onn, Philox::derive_subseed(seed_i, "random-sim"));
                HoennModel model = make_hoenn_model(std::move(onn), grid, detector, seed_i);
                TrainConfig frozen = train_config;
                frozen.train_onn = false;
                train_hoenn(model, dataset, frozen);
                out.write("checkpoint_random_enn_seed" + std::to_string(i) + ".json",
                          model_to_json(model, config_hash));
                artifacts.random_enn.push_back(std::move(model));
            }
        }
        // wave-domain-only baseline, fitted once
        {
            SimStack sim = build_stack(c.receiver, c.receiver.num_layers);
            FitConfig fit_config;
            fit_config.step = c.onn_fit.step;
            fit_config.iterations = c.onn_fit.iterations;
            fit_config.restarts = c.onn_fit.restarts;
            fit_config.seed = Philox::derive_subseed(run_seed, "onn-fit");
            fit_config.jobs = options.jobs;
            make_onn_only_classifier(sim, grid, fit_config);
            out.write("onn_only_sim.json", sim_to_json(sim));
            artifacts.onn_only_sim = std::move(sim);
            artifacts.onn_only_ready = true;
        }
    }
    else // doa_eval: load checkpoints
    {
        const fs::path dir = c.checkpoint_dir;
        for (int i = 0; i < c.num_seeds; ++i)
        {
            for (const char* kind : {"hoenn", "random_enn"})
            {
                const fs::path path =
                    dir / ("checkpoint_" + std::string(kind) + "_seed" + std::to_string(i) +
                           ".json");
                if (!fs::exists(path))
                    throw validation_error("doa_eval: missing checkpoint " + path.string());
                HoennModel model = model_from_json(read_file(path));
                if (std::string(kind) == "hoenn")
                    artifacts.hoenn.push_back(std::move(model));
                else
                    artifacts.random_enn.push_back(std::move(model));
            }
        }
        const fs::path onn_path = dir / "onn_only_sim.json";
        if (!fs::exists(onn_path))
            throw validation_error("doa_eval: missing checkpoint " + onn_path.string());
        artifacts.onn_only_sim = sim_from_json(read_file(onn_path));
        artifacts.onn_only_ready = true;
    }

    // common evaluation harness: identical test draws for every model
    std::vector<std::vector<AccuracyPoint>> hoenn_points;
    std::vector<std::vector<AccuracyPoint>> random_points;
    for (int i = 0; i < c.num_seeds; ++i)
    {
        hoenn_points.push_back(evaluate_accuracy(artifacts.hoenn[static_cast<std::size_t>(i)],
                                                 grid, c.eval_snr_db, c.eval_trials,
                                                 eval_seed));
        random_points.push_back(
            evaluate_accuracy(artifacts.random_enn[static_cast<std::size_t>(i)], grid,
                              c.eval_snr_db, c.eval_trials, eval_seed));
    }
    OnnOnlyClassifier onn_classifier{receive_transfer(artifacts.onn_only_sim), grid};
    const std::vector<AccuracyPoint> onn_points = evaluate_predictor(
        [&](const DoaSample& sample) { return onn_classifier.predict(sample.field); }, grid,
        artifacts.onn_only_sim.output_grid(), artifacts.onn_only_sim.carrier, c.eval_snr_db,
        c.eval_trials, eval_seed);

    accuracy_csv(out, "accuracy_hoenn.csv", c.eval_snr_db, hoenn_points);
    accuracy_csv(out, "accuracy_random_enn.csv", c.eval_snr_db, random_points);
    accuracy_csv(out, "accuracy_onn_only.csv", c.eval_snr_db, {onn_points});

    const std::vector<double> hoenn_mean = mean_accuracy(c.eval_snr_db, hoenn_points);
    const std::vector<double> random_mean = mean_accuracy(c.eval_snr_db, random_points);
    CsvDocument merged({"snr_db", "hoenn", "onn_only", "random_sim_enn"});
    for (std::size_t i = 0; i < c.eval_snr_db.size(); ++i)
    {
        const double row[4] = {c.eval_snr_db[i], hoenn_mean[i], onn_points[i].accuracy,
                               random_mean[i]};
        merged.add_row(row);
    }
    out.write("accuracy_comparison.csv", merged.render());

    // posterior-peak checks at the two reference directions
    {
        constexpr double kDeg = std::numbers::pi / 180.0;
        CsvDocument peaks({"azimuth_deg", "elevation_deg", "region", "snr_db",
                           "peak_fraction"});
        const double checks[2][2] = {{120.0, 60.0}, {240.0, 30.0}};
        for (const auto& check : checks)
        {
            const double az = check[0] * kDeg;
            const double el = check[1] * kDeg;
            const int region = grid.region_index(az, el);
            double fraction = 0.0;
            for (int i = 0; i < c.num_seeds; ++i)
                fraction += posterior_peak_fraction(
                    artifacts.hoenn[static_cast<std::size_t>(i)], grid, az, el, 20.0, 400,
                    Philox::derive_subseed(run_seed, "peak"));
            fraction /= c.num_seeds;
            const double row[5] = {check[0], check[1], static_cast<double>(region), 20.0,
                                   fraction};
            peaks.add_row(row);
        }
        out.write("posterior_peaks.csv", peaks.render());
    }
    std::printf("doa: wrote accuracy tables for %zu snr points\n", c.eval_snr_db.size());
}

} // namespace

RunResult run_scenario(const Scenario& input, const RunOptions& options)
{
    Scenario scenario = input;
    if (options.seed)
        scenario.seed = *options.seed;

    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    result.output_dir = resolve_output_dir(scenario, options);
    fs::create_directories(result.output_dir);

    OutputCollector out{result.output_dir, {}};
    switch (scenario.kind)
    {
    case ScenarioKind::beamfocus: run_beamfocus(scenario, options, out); break;
    case ScenarioKind::doa_train:
    case ScenarioKind::doa_eval: run_doa(scenario, options, out); break;
    case ScenarioKind::spectrum: run_spectrum(scenario, options, out); break;
    case ScenarioKind::channel_est: run_channel_est(scenario, options, out); break;
    case ScenarioKind::rayleigh: run_rayleigh(scenario, options, out); break;
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count();

    json outputs = json::array();
    for (const auto& file : out.files)
        outputs.push_back(json{{"file", file.string()},
                               {"fnv1a64", hash_hex(file_checksum(result.output_dir / file))}});
    const json manifest{{"schema", "wavestack-manifest"},
                        {"version", kSchemaVersion},
                        {"artifact_version", kVersion},
                        {"name", scenario.name},
                        {"kind", kind_to_string(scenario.kind)},
                        {"seed", scenario.seed},
                        {"scenario", json::parse(scenario_to_json(scenario))},
                        {"scenario_hash", hash_hex(scenario_hash(scenario))},
                        {"wall_clock_sec", wall},
                        {"outputs", outputs}};
    write_file_atomic(result.output_dir / "manifest.json", manifest.dump(2));

    result.outputs = out.files;
    result.manifest = result.output_dir / "manifest.json";
    return result;
}

} // namespace wavestack
