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

#include "wavestack/types.hpp"

namespace wavestack {

/// Digital zero-forcing precoder P = H^H (H H^H)^{-1}, rescaled by a single
/// factor so the total transmit power ||P||_F^2 equals total_power. H P is
/// then a scaled identity: inter-user interference is nulled and every user
/// receives equal power. Throws rank_error when H is row-rank deficient.
ComplexMatrix zf_precoder(const ComplexMatrix& channel, double total_power);

} // namespace wavestack
