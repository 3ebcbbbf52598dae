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

#include <stdexcept>

namespace wavestack {

/// Input violates a documented precondition or schema.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operand shapes are inconsistent.
class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Geometry that cannot be realized (coincident planes, points inside the stack, ...).
class geometry_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation at a singular point (coincident source/target).
class singularity_error : public geometry_error {
public:
    using geometry_error::geometry_error;
};

/// Linear system with fewer independent observations than unknowns.
class underdetermined_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Matrix does not have the rank an algorithm requires.
class rank_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace wavestack
