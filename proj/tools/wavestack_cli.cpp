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

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "wavestack/csv.hpp"
#include "wavestack/errors.hpp"
#include "wavestack/scenario.hpp"
#include "wavestack/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct SubcommandArgs
{
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;
    int jobs = 1;
    bool selected = false;
    wavestack::ScenarioKind kind;
};

void add_subcommand(CLI::App& app, SubcommandArgs& args, const std::string& name,
                    wavestack::ScenarioKind kind, const std::string& description)
{
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", args.config_path, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "Override the scenario seed");
    sub->add_option("--jobs", args.jobs, "Worker cap for parallel sections")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", args.out_dir, "Output directory (overrides scenario and "
                                           "WAVESTACK_OUT)");
    sub->callback([&args, kind]() {
        args.selected = true;
        args.kind = kind;
    });
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"wavestack: stacked-metasurface wave-domain computing experiments"};
    app.set_version_flag("--version", wavestack::kVersion);
    app.require_subcommand(1);

    SubcommandArgs args;
    add_subcommand(app, args, "beamfocus", wavestack::ScenarioKind::beamfocus,
                   "Multi-user near-field beamfocusing sweep over layer counts");
    add_subcommand(app, args, "doa-train", wavestack::ScenarioKind::doa_train,
                   "Train the hybrid classifier and baselines, then sweep SNR");
    add_subcommand(app, args, "doa-eval", wavestack::ScenarioKind::doa_eval,
                   "Evaluate previously trained checkpoints over the SNR grid");
    add_subcommand(app, args, "spectrum", wavestack::ScenarioKind::spectrum,
                   "Fit the stack to a 2-D DFT and emit the angular spectrum");
    add_subcommand(app, args, "channel-est", wavestack::ScenarioKind::channel_est,
                   "Multi-slot pilot-based least-squares channel estimation");
    add_subcommand(app, args, "rayleigh", wavestack::ScenarioKind::rayleigh,
                   "Near-/far-field boundary for an aperture and carrier");

    CLI11_PARSE(app, argc, argv);

    try
    {
        const wavestack::Scenario scenario =
            wavestack::scenario_from_json(wavestack::read_file(args.config_path));
        if (scenario.kind != args.kind)
            throw wavestack::validation_error(
                "config kind '" + wavestack::kind_to_string(scenario.kind) +
                "' does not match the subcommand");

        wavestack::RunOptions options;
        if (!args.out_dir.empty())
            options.output_dir = args.out_dir;
        if (args.seed >= 0)
            options.seed = static_cast<std::uint64_t>(args.seed);
        options.jobs = args.jobs;

        const wavestack::RunResult result = wavestack::run_scenario(scenario, options);
        std::printf("wrote %zu outputs to %s\n", result.outputs.size(),
                    result.output_dir.string().c_str());
        return kExitOk;
    }
    catch (const wavestack::validation_error& e)
    {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return kExitRuntime;
    }
}
