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

#include <array>
#include <cstdint>
#include <string_view>

#include "wavestack/types.hpp"

namespace wavestack {

/// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3", SC'11).
///
/// This is the single source of randomness in the library. The mapping from
/// (seed, stream, draw index) to outputs is fixed by this header so that
/// streams can be reproduced by any conforming implementation:
///
///   key     = (seed & 0xffffffff, seed >> 32)
///   counter = (block & 0xffffffff, block >> 32, stream & 0xffffffff, stream >> 32)
///
/// Each block yields four 32-bit words, consumed in order. Derived values:
///   u64      : two consecutive u32 (low word first)
///   double   : (u64 >> 11) * 2^-53, uniform in [0, 1)
///   gaussian : Box-Muller on the next two doubles u1, u2:
///              r = sqrt(-2 ln(1 - u1)), returns r*cos(2*pi*u2) first and
///              caches r*sin(2*pi*u2) for the following call
///   cgaussian: standard complex normal CN(0,1), (g0 + i*g1)/sqrt(2) with
///              g0, g1 the next two gaussians (real part first)
class Philox
{
  public:
    explicit Philox(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    double next_double();
    double next_gaussian();
    Complex next_cgaussian();

    /// Uniform phase in [0, 2*pi).
    double next_phase();

    /// One raw Philox4x32-10 block.
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);

    /// Deterministic sub-seed derivation: all module-level seeds are derived
    /// from the single scenario seed through this function, so any module can
    /// be re-run in isolation. Defined as the first two output words of a
    /// Philox block with key = split(master) and counter =
    /// (fnv1a64(tag) low, fnv1a64(tag) high, 0x5eed5eed, 0).
    static std::uint64_t derive_subseed(std::uint64_t master, std::string_view tag);

  private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_ = 0;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffer_pos_ = 4;
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

} // namespace wavestack
