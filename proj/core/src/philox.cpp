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

#include "wavestack/philox.hpp"

#include <cmath>
#include <numbers>

#include "wavestack/hash.hpp"

namespace wavestack {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> Philox::block(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key)
{
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round)
    {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream)
{
}

void Philox::refill()
{
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(block_index_),
        static_cast<std::uint32_t>(block_index_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = block(counter, key_);
    ++block_index_;
    buffer_pos_ = 0;
}

std::uint32_t Philox::next_u32()
{
    if (buffer_pos_ >= 4)
        refill();
    return buffer_[static_cast<std::size_t>(buffer_pos_++)];
}

std::uint64_t Philox::next_u64()
{
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
}

double Philox::next_double()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::next_gaussian()
{
    if (has_cached_gaussian_)
    {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_gaussian_ = r * std::sin(theta);
    has_cached_gaussian_ = true;
    return r * std::cos(theta);
}

Complex Philox::next_cgaussian()
{
    const double re = next_gaussian();
    const double im = next_gaussian();
    return Complex(re, im) * std::numbers::sqrt2 / 2.0;
}

double Philox::next_phase()
{
    return 2.0 * std::numbers::pi * next_double();
}

std::uint64_t Philox::derive_subseed(std::uint64_t master, std::string_view tag)
{
    const std::uint64_t h = fnv1a64(tag);
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(h),
        static_cast<std::uint32_t>(h >> 32),
        0x5eed5eedu,
        0u};
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(master),
        static_cast<std::uint32_t>(master >> 32)};
    const auto out = block(counter, key);
    return static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32);
}

} // namespace wavestack
