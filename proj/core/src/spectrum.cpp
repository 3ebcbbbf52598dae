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

#include "wavestack/spectrum.hpp"

#include <cmath>
#include <numbers>

#include "wavestack/errors.hpp"

namespace wavestack {

ComplexMatrix dft_matrix(int n)
{
    if (n < 1)
        throw validation_error("dft_matrix: n must be >= 1");
    ComplexMatrix f(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            f(j, k) = std::polar(1.0, -2.0 * std::numbers::pi * j * k / n);
    return f;
}

ComplexMatrix dft_matrix_2d(int rows, int cols)
{
    const ComplexMatrix fr = dft_matrix(rows);
    const ComplexMatrix fc = dft_matrix(cols);
    const int n = rows * cols;
    ComplexMatrix f2d(n, n);
    for (int r1 = 0; r1 < rows; ++r1)
        for (int c1 = 0; c1 < cols; ++c1)
            for (int r2 = 0; r2 < rows; ++r2)
                for (int c2 = 0; c2 < cols; ++c2)
                    f2d(r1 * cols + c1, r2 * cols + c2) = fr(r1, r2) * fc(c1, c2);
    return f2d;
}

double matrix_correlation(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw dimension_error("matrix_correlation: shape mismatch");
    const double na = a.norm();
    const double nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0))
        throw validation_error("matrix_correlation: zero-norm matrix");
    return std::abs((a.conjugate().cwiseProduct(b)).sum()) / (na * nb);
}

SpectrumFit fit_dft_spectrum(SimStack& sim, int array_rows, int array_cols,
                             const FitConfig& config)
{
    const int n = array_rows * array_cols;
    if (sim.num_feeds() != n)
        throw validation_error("fit_dft_spectrum: feed count must equal the DFT size");
    if (sim.output_size() != n)
        throw validation_error("fit_dft_spectrum: output aperture must equal the DFT size");

    const ComplexMatrix target = dft_matrix_2d(array_rows, array_cols);
    SpectrumFit fit;
    fit.report = fit_transfer(sim, nullptr, target, config);
    fit.correlation = matrix_correlation(transfer_matrix(sim), target);
    return fit;
}

RealVector angular_power_spectrum(const ComplexMatrix& transfer, const ComplexVector& field)
{
    if (transfer.cols() != field.size())
        throw dimension_error("angular_power_spectrum: field size mismatch");
    return (transfer * field).cwiseAbs2();
}

RealVector angular_power_spectrum(const SimStack& sim, const ComplexVector& field)
{
    return angular_power_spectrum(transfer_matrix(sim), field);
}

} // namespace wavestack
