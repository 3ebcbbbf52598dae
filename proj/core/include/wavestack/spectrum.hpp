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

#include "wavestack/beamforming.hpp"
#include "wavestack/sim_stack.hpp"

namespace wavestack {

/// Unnormalized DFT matrix, F(j, k) = exp(-2 pi i j k / n).
ComplexMatrix dft_matrix(int n);

/// 2-D DFT over a rows x cols array with row-major vectorization:
/// F2d = F_rows (x) F_cols (Kronecker product).
ComplexMatrix dft_matrix_2d(int rows, int cols);

/// |<vec(a), vec(b)>| / (||a||_F ||b||_F), the scale- and phase-invariant
/// alignment between two matrices.
double matrix_correlation(const ComplexMatrix& a, const ComplexMatrix& b);

struct SpectrumFit
{
    FitReport report;
    double correlation = 0.0; // achieved transfer vs the 2-D DFT target
};

/// Fits the stack's transfer matrix to the 2-D DFT of a rows x cols array.
/// Requires feeds == rows*cols == output aperture size (intermediate layers
/// may be larger). The fitted phases are left in `sim`.
SpectrumFit fit_dft_spectrum(SimStack& sim, int array_rows, int array_cols,
                             const FitConfig& config);

/// Angular power spectrum |M f|^2 of a field sampled on the input array.
RealVector angular_power_spectrum(const ComplexMatrix& transfer, const ComplexVector& field);
RealVector angular_power_spectrum(const SimStack& sim, const ComplexVector& field);

} // namespace wavestack
