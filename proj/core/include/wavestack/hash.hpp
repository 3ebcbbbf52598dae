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
#include <string>
#include <string_view>

namespace wavestack {

/// FNV-1a 64-bit content hash. Used for scenario hashes and output checksums;
/// not a cryptographic hash.
std::uint64_t fnv1a64(std::string_view data);

/// Hash of a file's raw bytes.
std::uint64_t file_checksum(const std::filesystem::path& path);

/// 16-digit lowercase hex rendering of a 64-bit hash.
std::string hash_hex(std::uint64_t h);

} // namespace wavestack
