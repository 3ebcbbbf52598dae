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
#include <string>

#include "wavestack/channel.hpp"
#include "wavestack/hoenn.hpp"
#include "wavestack/sim_stack.hpp"

namespace wavestack {

// Versioned JSON containers. Doubles are emitted with shortest round-trip
// formatting, so serialize -> parse -> serialize is byte-stable and numeric
// state survives bit-exactly. Matrix payloads are column-major; element
// positions are stored explicitly so perturbed (non-lattice) stacks survive
// a round trip. HT3 coupling curves are not serialized; loading restores the
// default parametric curve for the stored amplitude range.

std::string sim_to_json(const SimStack& sim);
SimStack sim_from_json(const std::string& text);

std::string channel_to_json(const ChannelRealization& channel);
ChannelRealization channel_from_json(const std::string& text);

std::string operator_to_json(const DiffractionOperator& op);
DiffractionOperator operator_from_json(const std::string& text);

std::string model_to_json(const HoennModel& model, std::uint64_t config_hash);
HoennModel model_from_json(const std::string& text, std::uint64_t* config_hash = nullptr);

} // namespace wavestack
