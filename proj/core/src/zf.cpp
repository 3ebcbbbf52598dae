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

#include "wavestack/zf.hpp"

#include <cmath>

#include "wavestack/errors.hpp"

namespace wavestack {

ComplexMatrix zf_precoder(const ComplexMatrix& channel, double total_power)
{
    if (!(total_power > 0.0))
        throw validation_error("zf_precoder: total power must be positive");
    const Eigen::Index users = channel.rows();
    if (channel.cols() < users)
        throw validation_error("zf_precoder: need at least as many antennas as users");

    const ComplexMatrix gram = channel * channel.adjoint();
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(gram);
    if (qr.rank() < users)
        throw rank_error("zf_precoder: channel is row-rank deficient, pseudo-inverse failed");

    const ComplexMatrix raw = channel.adjoint() * qr.solve(ComplexMatrix::Identity(users, users));
    const double scale = std::sqrt(total_power) / raw.norm();
    return scale * raw;
}

} // namespace wavestack
