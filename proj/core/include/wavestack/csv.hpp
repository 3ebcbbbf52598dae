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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wavestack/types.hpp"

namespace wavestack {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

/// In-memory CSV document: header row plus full-precision numeric rows.
/// render() produces the final text; write it with write_file_atomic.
class CsvDocument
{
  public:
    explicit CsvDocument(std::vector<std::string> header);

    void add_row(std::span<const double> values);
    void add_row(const RealVector& values);

    std::string render() const;
    std::size_t row_count() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

/// Row-major dump of a matrix with one leading index column per axis
/// (columns: row, col, value).
CsvDocument matrix_csv(const RealMatrix& matrix);

/// Writes content via temp file + rename so readers never observe partial
/// output.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace wavestack
