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

#include <cstdlib>
#include <filesystem>
#include <numbers>

#include "wavestack/csv.hpp"
#include "wavestack/errors.hpp"
#include "wavestack/hash.hpp"
#include "wavestack/hoenn.hpp"
#include "wavestack/philox.hpp"
#include "wavestack/scenario.hpp"
#include "wavestack/serialize.hpp"

using namespace wavestack;
namespace fs = std::filesystem;
namespace
{
const CarrierSpec k10GHz = CarrierSpec::from_frequency(10e9);

fs::path temp_dir(const std::string& tag)
{
    const fs::path dir = fs::temp_directory_path() / ("wavestack_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

SimStack demo_stack()
{
    const PlanarGrid feed = make_planar_grid(1, 2, 0.015, Vec3::Zero(), Vec3::UnitZ());
    SimStack sim = make_uniform_stack(2, 3, 3, 0.015, 0.003, k10GHz, feed);
    randomize_phases(sim, 42);
    return sim;
}

} // namespace

TEST_CASE("doubles render with exact round-trip formatting")
{
    for (const double v : {0.1, 1.0 / 3.0, std::numbers::pi, 1e-300, -2.5e17, 46.698973327741285})
    {
        const std::string text = format_double(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
}

TEST_CASE("sim configuration round-trips bit-exactly, including perturbed positions")
{
    SimStack sim = demo_stack();
    ImperfectionModel imperfections;
    imperfections.phase_jitter_std = 0.02;
    imperfections.position_error_std_m = 1e-5;
    imperfections.seed = 9;
    sim = apply_imperfections(sim, imperfections).sim;

    const std::string text = sim_to_json(sim);
    SimStack loaded = sim_from_json(text);
    CHECK(sim_to_json(loaded) == text);
    CHECK(transfer_matrix(loaded) == transfer_matrix(sim));
}

TEST_CASE("hardware profiles survive serialization")
{
    const PlanarGrid feed = make_planar_grid(1, 2, 0.015, Vec3::Zero(), Vec3::UnitZ());
    SimStack sim = make_uniform_stack(2, 2, 2, 0.015, 0.003, k10GHz, feed, -1.0,
                                      HardwareProfile::ht3(0.25, 1.5));
    sim.layers[0].amplitudes.setConstant(1.25);
    SimStack loaded = sim_from_json(sim_to_json(sim));
    CHECK(loaded.layers[0].profile.kind == HardwareType::HT3_active);
    REQUIRE(loaded.layers[0].profile.amplitude_range.has_value());
    CHECK(loaded.layers[0].profile.amplitude_range->second == 1.5);
    CHECK(loaded.layers[0].amplitudes == sim.layers[0].amplitudes);
    // default coupling curve is reconstructed for the stored range
    const auto [amp, phase] = loaded.layers[0].profile.coupling_curve(1.0);
    CHECK(amp == 1.5);
}

TEST_CASE("channel container matches the golden file")
{
    const char* golden_dir = std::getenv("WAVESTACK_GOLDEN_DIR");
    REQUIRE(golden_dir != nullptr);
    const PlanarGrid grid = make_planar_grid(2, 2, 0.0149896229, Vec3::Zero(), Vec3::UnitZ());
    const ChannelRealization channel = sample_correlated_rayleigh(grid, 2, 0.7, 42, k10GHz);
    const std::string text = channel_to_json(channel);
    const std::string golden = read_file(fs::path(golden_dir) / "channel_2x2_seed42.json");
    CHECK(text == golden);

    const ChannelRealization loaded = channel_from_json(text);
    CHECK(loaded.matrix == channel.matrix);
    CHECK(loaded.seed == 42);
}

TEST_CASE("diffraction operators round-trip")
{
    const PlanarGrid src = make_planar_grid(2, 2, 0.015, Vec3::Zero(), Vec3::UnitZ());
    const PlanarGrid dst = make_planar_grid(3, 3, 0.015, Vec3(0, 0, 0.003), Vec3::UnitZ());
    const DiffractionOperator op = build_interlayer_operator(src, dst, k10GHz);
    const DiffractionOperator loaded = operator_from_json(operator_to_json(op));
    CHECK(loaded.matrix == op.matrix);
    CHECK(loaded.spacing_m == op.spacing_m);
}

TEST_CASE("model checkpoints preserve behaviour exactly")
{
    const AngularGrid grid{2, 2};
    const PlanarGrid antennas = make_planar_grid(2, 2, 0.015, Vec3::Zero(), Vec3::UnitZ());
    SimStack onn = make_uniform_stack(2, 4, 4, 0.015, 0.01, k10GHz, antennas);
    randomize_phases(onn, 3);
    HoennModel model = make_hoenn_model(std::move(onn), grid, DetectorKind::magnitude_squared, 3);
    model.detector_scale = 0.125;

    std::uint64_t hash_out = 0;
    HoennModel loaded = model_from_json(model_to_json(model, 0xabcdef1234ull), &hash_out);
    CHECK(hash_out == 0xabcdef1234ull);

    Philox rng(4, 0);
    ComplexVector field(model.aperture_size());
    for (Eigen::Index i = 0; i < field.size(); ++i)
        field(i) = rng.next_cgaussian();
    CHECK(hoenn_forward(loaded, field) == hoenn_forward(model, field));
}

TEST_CASE("scenario parsing is strict and resolution is idempotent")
{
    const std::string text = R"({
        "name": "demo",
        "kind": "beamfocus",
        "seed": 3,
        "beamfocus": {"layer_counts": [1, 2], "num_users": 2, "map_nx": 5}
    })";
    const Scenario scenario = scenario_from_json(text);
    CHECK(scenario.beamfocus.geometry.pitch_m > 0.0); // lambda/2 resolved
    const std::string canonical = scenario_to_json(scenario);
    const Scenario reparsed = scenario_from_json(canonical);
    CHECK(scenario_to_json(reparsed) == canonical);
    CHECK(scenario_hash(reparsed) == scenario_hash(scenario));

    CHECK_THROWS_AS(scenario_from_json(R"({"name":"x","kind":"rayleigh","raileigh":{}})"),
                    validation_error);
    CHECK_THROWS_AS(scenario_from_json(R"({"name":"x","kind":"rayleigh",
        "rayleigh":{"aperture_m":0.5,"bogus":1}})"),
                    validation_error);
    CHECK_THROWS_AS(scenario_from_json(R"({"kind":"rayleigh"})"), validation_error);
    CHECK_THROWS_AS(scenario_from_json(R"({"name":"x","kind":"doa_eval","doa":{}})"),
                    validation_error); // checkpoint_dir required
    CHECK_THROWS_AS(
        scenario_from_json(
            R"({"name":"x","kind":"beamfocus","beamfocus":{"num_users":0}})"),
        validation_error);
    CHECK_THROWS_AS(
        scenario_from_json(R"({"name":"x","kind":"channel_est","channel_est":{"trials":0}})"),
        validation_error);
}

TEST_CASE("output directory hash is excluded from the scenario identity")
{
    Scenario a = scenario_from_json(R"({"name":"d","kind":"rayleigh","rayleigh":{}})");
    Scenario b = a;
    b.output_dir = "/somewhere/else";
    CHECK(scenario_hash(a) == scenario_hash(b));
}

TEST_CASE("runs are deterministic and the manifest checksums its outputs")
{
    const Scenario scenario = scenario_from_json(R"({
        "name": "det",
        "kind": "channel_est",
        "seed": 11,
        "channel_est": {
            "geometry": {"rows": 3, "cols": 3, "num_layers": 1,
                          "feed_rows": 1, "feed_cols": 3},
            "snr_db": [0, 10], "trials": 4
        }
    })");

    const fs::path dir_a = temp_dir("run_a");
    const fs::path dir_b = temp_dir("run_b");
    RunOptions options_a;
    options_a.output_dir = dir_a.string();
    RunOptions options_b;
    options_b.output_dir = dir_b.string();
    const RunResult ra = run_scenario(scenario, options_a);
    const RunResult rb = run_scenario(scenario, options_b);

    REQUIRE(!ra.outputs.empty());
    REQUIRE(ra.outputs.size() == rb.outputs.size());
    for (std::size_t i = 0; i < ra.outputs.size(); ++i)
        CHECK(file_checksum(dir_a / ra.outputs[i]) == file_checksum(dir_b / rb.outputs[i]));

    // manifest lists every output with a matching checksum
    const std::string manifest = read_file(ra.manifest);
    for (const auto& file : ra.outputs)
    {
        CHECK(manifest.find(file.string()) != std::string::npos);
        CHECK(manifest.find(hash_hex(file_checksum(dir_a / file))) != std::string::npos);
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("cli binary honors the documented exit codes")
{
    const char* cli = std::getenv("WAVESTACK_CLI_BIN");
    REQUIRE(cli != nullptr);
    const fs::path dir = temp_dir("cli");

    const fs::path config = dir / "ray.json";
    write_file_atomic(config,
                      R"({"name":"ray","kind":"rayleigh","rayleigh":{"aperture_m":0.5}})");

    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(cli) + " " + args + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    CHECK(run("rayleigh --config " + config.string() + " --out " + (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out" / "rayleigh.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));

    // kind/subcommand mismatch and broken config are validation failures
    CHECK(run("beamfocus --config " + config.string()) == 1);
    const fs::path broken = dir / "broken.json";
    write_file_atomic(broken, "{not json");
    CHECK(run("rayleigh --config " + broken.string()) == 1);
    fs::remove_all(dir);
}

TEST_CASE("csv documents enforce header width")
{
    CsvDocument doc({"a", "b"});
    const double row[2] = {1.0, 2.0};
    doc.add_row(row);
    CHECK(doc.render() == "a,b\n1,2\n");
    RealVector bad(3);
    bad << 1, 2, 3;
    CHECK_THROWS_AS(doc.add_row(bad), dimension_error);
}
