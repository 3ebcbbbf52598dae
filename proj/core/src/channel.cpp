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

#include "wavestack/channel.hpp"

#include <cmath>
#include <numbers>

#include "wavestack/errors.hpp"
#include "wavestack/philox.hpp"

namespace wavestack {

namespace {

double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

} // namespace

SpatialCorrelation sinc_correlation(const PlanarGrid& grid, const CarrierSpec& carrier)
{
    const int n = grid.size();
    SpatialCorrelation corr;
    corr.matrix.resize(n, n);
    for (int i = 0; i < n; ++i)
    {
        corr.matrix(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j)
        {
            const double d = (grid.element_positions[static_cast<std::size_t>(i)] -
                              grid.element_positions[static_cast<std::size_t>(j)])
                                 .norm();
            const double r = sinc(2.0 * d / carrier.wavelength_m);
            corr.matrix(i, j) = r;
            corr.matrix(j, i) = r;
        }
    }

    // PSD projection: clamp negative eigenvalues, track the clamped mass.
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(corr.matrix);
    const RealVector& values = eig.eigenvalues();
    double clamped = 0.0;
    RealVector clamped_values = values;
    for (int i = 0; i < n; ++i)
    {
        if (clamped_values(i) < 0.0)
        {
            clamped += -clamped_values(i);
            clamped_values(i) = 0.0;
        }
    }
    if (clamped > 0.0)
        corr.matrix = eig.eigenvectors() * clamped_values.asDiagonal() *
                      eig.eigenvectors().transpose();
    corr.clamped_mass = clamped;
    return corr;
}

ChannelRealization sample_correlated_rayleigh(const PlanarGrid& grid, int num_users,
                                              double pathloss, std::uint64_t seed,
                                              const CarrierSpec& carrier)
{
    if (num_users < 1)
        throw validation_error("sample_correlated_rayleigh: num_users must be >= 1");
    if (pathloss < 0.0)
        throw validation_error("sample_correlated_rayleigh: pathloss must be >= 0");

    const SpatialCorrelation corr = sinc_correlation(grid, carrier);
    const int n = grid.size();

    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(corr.matrix);
    RealVector roots = eig.eigenvalues();
    for (int i = 0; i < n; ++i)
        roots(i) = std::sqrt(std::max(0.0, roots(i)));
    const RealMatrix sqrt_r =
        eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();

    Philox rng(seed, 0);
    ComplexMatrix g(num_users, n);
    for (int u = 0; u < num_users; ++u)
        for (int e = 0; e < n; ++e)
            g(u, e) = rng.next_cgaussian();

    ChannelRealization real;
    real.matrix = std::sqrt(pathloss) * (g * sqrt_r);
    real.correlation = corr.matrix;
    real.pathloss = pathloss;
    real.seed = seed;
    real.clamped_mass = corr.clamped_mass;
    return real;
}

} // namespace wavestack
