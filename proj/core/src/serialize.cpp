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

#include "wavestack/serialize.hpp"

#include <json.hpp>

#include "wavestack/errors.hpp"
#include "wavestack/hash.hpp"
#include "wavestack/version.hpp"

namespace wavestack {

namespace {

using nlohmann::json;

json parse(const std::string& text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::exception& e)
    {
        throw validation_error(std::string("invalid JSON document: ") + e.what());
    }
}

void check_schema(const json& j, const char* name)
{
    try
    {
        if (j.at("schema").get<std::string>() != name)
            throw validation_error(std::string("expected schema '") + name + "'");
        if (j.at("version").get<int>() != kSchemaVersion)
            throw validation_error("unsupported schema version");
    }
    catch (const json::exception& e)
    {
        throw validation_error(std::string("malformed header: ") + e.what());
    }
}

json vec3_to_json(const Vec3& v)
{
    return json::array({v.x(), v.y(), v.z()});
}

Vec3 vec3_from_json(const json& j)
{
    return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

json grid_to_json(const PlanarGrid& grid)
{
    json positions = json::array();
    for (const auto& p : grid.element_positions)
        positions.push_back(vec3_to_json(p));
    return json{{"rows", grid.rows},
                {"cols", grid.cols},
                {"pitch_m", grid.pitch_m},
                {"center", vec3_to_json(grid.center)},
                {"normal", vec3_to_json(grid.normal)},
                {"axis_col", vec3_to_json(grid.axis_col)},
                {"axis_row", vec3_to_json(grid.axis_row)},
                {"positions", positions}};
}

PlanarGrid grid_from_json(const json& j)
{
    PlanarGrid grid;
    grid.rows = j.at("rows").get<int>();
    grid.cols = j.at("cols").get<int>();
    grid.pitch_m = j.at("pitch_m").get<double>();
    grid.center = vec3_from_json(j.at("center"));
    grid.normal = vec3_from_json(j.at("normal"));
    grid.axis_col = vec3_from_json(j.at("axis_col"));
    grid.axis_row = vec3_from_json(j.at("axis_row"));
    const auto& positions = j.at("positions");
    if (static_cast<int>(positions.size()) != grid.rows * grid.cols)
        throw validation_error("grid: position count != rows*cols");
    for (const auto& p : positions)
        grid.element_positions.push_back(vec3_from_json(p));
    return grid;
}

const char* kind_name(HardwareType kind)
{
    switch (kind)
    {
    case HardwareType::HT1_fixed: return "ht1";
    case HardwareType::HT2_passive_programmable: return "ht2";
    case HardwareType::HT3_active: return "ht3";
    }
    return "ht2";
}

HardwareType kind_from_name(const std::string& name)
{
    if (name == "ht1")
        return HardwareType::HT1_fixed;
    if (name == "ht2")
        return HardwareType::HT2_passive_programmable;
    if (name == "ht3")
        return HardwareType::HT3_active;
    throw validation_error("unknown hardware kind '" + name + "'");
}

json profile_to_json(const HardwareProfile& profile)
{
    json j{{"kind", kind_name(profile.kind)}};
    j["phase_bits"] = profile.phase_bits ? json(*profile.phase_bits) : json(nullptr);
    j["amplitude_range"] =
        profile.amplitude_range
            ? json::array({profile.amplitude_range->first, profile.amplitude_range->second})
            : json(nullptr);
    j["saturation_amplitude"] =
        profile.saturation_amplitude ? json(*profile.saturation_amplitude) : json(nullptr);
    return j;
}

HardwareProfile profile_from_json(const json& j)
{
    const HardwareType kind = kind_from_name(j.at("kind").get<std::string>());
    HardwareProfile profile;
    if (kind == HardwareType::HT3_active)
    {
        const auto& range = j.at("amplitude_range");
        if (range.is_null())
            throw validation_error("ht3 profile requires an amplitude range");
        profile = HardwareProfile::ht3(range.at(0).get<double>(), range.at(1).get<double>());
    }
    else
    {
        profile.kind = kind;
        if (!j.at("phase_bits").is_null())
            profile.phase_bits = j.at("phase_bits").get<int>();
    }
    if (!j.at("saturation_amplitude").is_null())
        profile.saturation_amplitude = j.at("saturation_amplitude").get<double>();
    return profile;
}

json real_vector_to_json(const RealVector& v)
{
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back(v(i));
    return arr;
}

RealVector real_vector_from_json(const json& j)
{
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

json complex_matrix_to_json(const ComplexMatrix& m)
{
    json re = json::array();
    json im = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
        {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

ComplexMatrix complex_matrix_from_json(const json& j)
{
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<Eigen::Index>(re.size()) != rows * cols || re.size() != im.size())
        throw validation_error("complex matrix: payload size mismatch");
    ComplexMatrix m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r, ++idx)
            m(r, c) = Complex(re.at(idx).get<double>(), im.at(idx).get<double>());
    return m;
}

json real_matrix_to_json(const RealMatrix& m)
{
    json data = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            data.push_back(m(r, c));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

RealMatrix real_matrix_from_json(const json& j)
{
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw validation_error("real matrix: payload size mismatch");
    RealMatrix m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r, ++idx)
            m(r, c) = data.at(idx).get<double>();
    return m;
}

json sim_to_json_object(const SimStack& sim)
{
    json layers = json::array();
    for (const auto& layer : sim.layers)
        layers.push_back(json{{"grid", grid_to_json(layer.grid)},
                              {"phases", real_vector_to_json(layer.phases)},
                              {"amplitudes", real_vector_to_json(layer.amplitudes)},
                              {"profile", profile_to_json(layer.profile)}});
    return json{{"schema", "wavestack-sim"},
                {"version", kSchemaVersion},
                {"carrier_hz", sim.carrier.frequency_hz},
                {"layer_spacing_m", sim.layer_spacing_m},
                {"feed_grid", sim.feed_grid ? grid_to_json(*sim.feed_grid) : json(nullptr)},
                {"layers", layers}};
}

SimStack sim_from_json_object(const json& j)
{
    check_schema(j, "wavestack-sim");
    std::vector<MetasurfaceLayer> layers;
    for (const auto& lj : j.at("layers"))
    {
        MetasurfaceLayer layer;
        layer.grid = grid_from_json(lj.at("grid"));
        layer.phases = real_vector_from_json(lj.at("phases"));
        layer.amplitudes = real_vector_from_json(lj.at("amplitudes"));
        layer.profile = profile_from_json(lj.at("profile"));
        layers.push_back(std::move(layer));
    }
    std::optional<PlanarGrid> feed;
    if (!j.at("feed_grid").is_null())
        feed = grid_from_json(j.at("feed_grid"));
    return make_sim_stack(std::move(layers), j.at("layer_spacing_m").get<double>(),
                          CarrierSpec::from_frequency(j.at("carrier_hz").get<double>()),
                          std::move(feed));
}

} // namespace

std::string sim_to_json(const SimStack& sim)
{
    return sim_to_json_object(sim).dump(2);
}

SimStack sim_from_json(const std::string& text)
{
    return sim_from_json_object(parse(text));
}

std::string channel_to_json(const ChannelRealization& channel)
{
    const json j{{"schema", "wavestack-channel"},
                 {"version", kSchemaVersion},
                 {"pathloss", channel.pathloss},
                 {"seed", channel.seed},
                 {"clamped_mass", channel.clamped_mass},
                 {"matrix", complex_matrix_to_json(channel.matrix)},
                 {"correlation", real_matrix_to_json(channel.correlation)}};
    return j.dump(2);
}

ChannelRealization channel_from_json(const std::string& text)
{
    const json j = parse(text);
    check_schema(j, "wavestack-channel");
    ChannelRealization channel;
    channel.pathloss = j.at("pathloss").get<double>();
    channel.seed = j.at("seed").get<std::uint64_t>();
    channel.clamped_mass = j.at("clamped_mass").get<double>();
    channel.matrix = complex_matrix_from_json(j.at("matrix"));
    channel.correlation = real_matrix_from_json(j.at("correlation"));
    return channel;
}

std::string operator_to_json(const DiffractionOperator& op)
{
    const json j{{"schema", "wavestack-operator"},
                 {"version", kSchemaVersion},
                 {"spacing_m", op.spacing_m},
                 {"source_grid", grid_to_json(op.source_grid)},
                 {"target_grid", grid_to_json(op.target_grid)},
                 {"matrix", complex_matrix_to_json(op.matrix)}};
    return j.dump(2);
}

DiffractionOperator operator_from_json(const std::string& text)
{
    const json j = parse(text);
    check_schema(j, "wavestack-operator");
    DiffractionOperator op;
    op.spacing_m = j.at("spacing_m").get<double>();
    op.source_grid = grid_from_json(j.at("source_grid"));
    op.target_grid = grid_from_json(j.at("target_grid"));
    op.matrix = complex_matrix_from_json(j.at("matrix"));
    op.validate();
    return op;
}

std::string model_to_json(const HoennModel& model, std::uint64_t config_hash)
{
    const json j{
        {"schema", "wavestack-hoenn"},
        {"version", kSchemaVersion},
        {"onn", sim_to_json_object(model.onn)},
        {"detector",
         model.detector == DetectorKind::magnitude_squared ? "magnitude_squared" : "magnitude"},
        {"enn_weights", real_matrix_to_json(model.enn_weights)},
        {"enn_bias", real_vector_to_json(model.enn_bias)},
        {"detector_scale", model.detector_scale},
        {"config_hash", hash_hex(config_hash)}};
    return j.dump(2);
}

HoennModel model_from_json(const std::string& text, std::uint64_t* config_hash)
{
    const json j = parse(text);
    check_schema(j, "wavestack-hoenn");
    HoennModel model;
    model.onn = sim_from_json_object(j.at("onn"));
    const std::string detector = j.at("detector").get<std::string>();
    if (detector == "magnitude_squared")
        model.detector = DetectorKind::magnitude_squared;
    else if (detector == "magnitude")
        model.detector = DetectorKind::magnitude;
    else
        throw validation_error("unknown detector '" + detector + "'");
    model.enn_weights = real_matrix_from_json(j.at("enn_weights"));
    model.enn_bias = real_vector_from_json(j.at("enn_bias"));
    model.detector_scale = j.at("detector_scale").get<double>();
    if (config_hash)
        *config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
    model.validate();
    return model;
}

} // namespace wavestack
