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

#include "wavestack/diffraction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wavestack/errors.hpp"

namespace wavestack {

void DiffractionOperator::validate() const
{
    if (matrix.rows() != target_grid.size() || matrix.cols() != source_grid.size())
        throw dimension_error("DiffractionOperator: matrix does not match grids");
    if (!matrix.allFinite())
        throw validation_error("DiffractionOperator: non-finite entries");
}

Complex rs_coefficient(const Vec3& source_pos, const Vec3& source_normal,
                       double source_area_m2, const Vec3& target_pos,
                       const CarrierSpec& carrier)
{
    constexpr double pi = std::numbers::pi;
    if (!(source_area_m2 > 0.0))
        throw validation_error("rs_coefficient: element area must be positive");
    const Vec3 diff = target_pos - source_pos;
    const double d = diff.norm();
    if (d < 1e-12)
        throw singularity_error("rs_coefficient: coincident source and target");
    const double dz = diff.dot(source_normal);
    const double lambda = carrier.wavelength_m;
    const Complex radial(1.0 / (2.0 * pi * d), -1.0 / lambda);
    return (source_area_m2 * dz / (d * d)) * radial * std::polar(1.0, 2.0 * pi * d / lambda);
}

DiffractionOperator build_interlayer_operator(const PlanarGrid& source,
                                              const PlanarGrid& target,
                                              const CarrierSpec& carrier)
{
    if (source.normal.cross(target.normal).norm() > 1e-9)
        throw geometry_error("build_interlayer_operator: grids are not parallel");
    const double offset = (target.center - source.center).dot(source.normal);
    if (std::abs(offset) < 1e-12)
        throw geometry_error("build_interlayer_operator: coincident planes");

    // Propagation direction is source -> target.
    const Vec3 normal = offset > 0.0 ? source.normal : Vec3(-source.normal);
    const double area = source.pitch_m * source.pitch_m;

    DiffractionOperator op;
    op.source_grid = source;
    op.target_grid = target;
    op.spacing_m = std::abs(offset);
    op.matrix.resize(target.size(), source.size());
    for (int m = 0; m < target.size(); ++m)
        for (int n = 0; n < source.size(); ++n)
            op.matrix(m, n) =
                rs_coefficient(source.element_positions[static_cast<std::size_t>(n)], normal,
                               area, target.element_positions[static_cast<std::size_t>(m)],
                               carrier);
    return op;
}

} // namespace wavestack
