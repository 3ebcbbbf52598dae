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

#include "wavestack/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "wavestack/errors.hpp"

namespace wavestack {

std::string format_double(double value)
{
    char buf[40];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

CsvDocument::CsvDocument(std::vector<std::string> header) : header_(std::move(header))
{
    if (header_.empty())
        throw validation_error("CsvDocument: header must not be empty");
}

void CsvDocument::add_row(std::span<const double> values)
{
    if (values.size() != header_.size())
        throw dimension_error("CsvDocument: row width does not match header");
    rows_.emplace_back(values.begin(), values.end());
}

void CsvDocument::add_row(const RealVector& values)
{
    add_row(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

std::string CsvDocument::render() const
{
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i)
        out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& row : rows_)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
    return out.str();
}

CsvDocument matrix_csv(const RealMatrix& matrix)
{
    CsvDocument doc({"row", "col", "value"});
    for (Eigen::Index r = 0; r < matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < matrix.cols(); ++c)
        {
            const double row[3] = {static_cast<double>(r), static_cast<double>(c),
                                   matrix(r, c)};
            doc.add_row(row);
        }
    return doc;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("write_file_atomic: cannot open " + tmp.string());
        out << content;
        if (!out)
            throw std::runtime_error("write_file_atomic: failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("read_file: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace wavestack
