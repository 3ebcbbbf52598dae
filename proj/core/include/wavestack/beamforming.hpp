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

#include <cstdint>
#include <optional>
#include <vector>

#include "wavestack/channel.hpp"
#include "wavestack/response.hpp"
#include "wavestack/sim_stack.hpp"

namespace wavestack {

enum class ChannelMode
{
    near_field_los,
    correlated_rayleigh,
};

/// Multi-user downlink served through a transmit-side SIM: one feed antenna
/// per user stream, the SIM replaces the digital precoder.
struct BeamScenario
{
    SimStack sim;
    std::vector<Vec3> user_positions;
    double total_power = 1.0;
    ChannelMode channel_mode = ChannelMode::near_field_los;
    double pathloss = 1.0;          // correlated_rayleigh mode
    std::uint64_t channel_seed = 0; // correlated_rayleigh mode

    void validate() const;
};

/// users x output-aperture channel rows: spherical-wave responses in LoS
/// mode, one correlated Rayleigh draw otherwise.
ComplexMatrix user_channel(const BeamScenario& scenario);

/// E = H_user * transfer_matrix(sim), users x feeds.
ComplexMatrix end_to_end_channel(const SimStack& sim, const ComplexMatrix& h_user);

/// Scale-normalized fitting error || E/||E||_F - T/||T||_F ||_F^2. Both sides
/// are normalized because a passive SIM cannot realize arbitrary gain; the
/// loss isolates subspace alignment from absolute power.
double normalized_fit_loss(const ComplexMatrix& achieved, const ComplexMatrix& target);

/// SINR per user for equal-power feeds (total_power / feeds each) and
/// unit-variance receiver noise, in dB.
RealVector per_user_sinr_db(const ComplexMatrix& end_to_end, double total_power);

/// Off-diagonal power fraction of the end-to-end matrix.
double leakage_fraction(const ComplexMatrix& end_to_end);

struct FitConfig
{
    double step = 0.1;
    int iterations = 2000;
    int restarts = 5;
    std::uint64_t seed = 0;
    int jobs = 1;
    /// stop a restart early once the loss falls below this
    double zero_loss_tolerance = 1e-14;
};

struct FitReport
{
    int iterations = 0;                  // iterations run by the selected restart
    RealVector loss_trace;               // loss per iteration, selected restart
    std::vector<RealVector> final_phases; // per layer, wrapped
    RealVector per_user_sinr_db;
    double final_loss = 0.0;             // best loss of the selected restart
    std::vector<double> restart_losses;  // best loss per restart
    int best_restart = 0;
    double leakage = 0.0;
    std::optional<double> projected_loss; // after HT2 quantized projection
};

/// Loss and analytic gradient of the normalized fitting error at the given
/// per-layer phases, for E(phi) = pre * Phi_L W_L ... Phi_1 W_in (pre may be
/// null for E = transfer matrix itself). Gradient is computed by one
/// forward/backward sweep through the cascade.
double fit_loss_and_gradient(const SimStack& sim, const ComplexMatrix* pre,
                             const ComplexMatrix& target,
                             const std::vector<RealVector>& phases,
                             std::vector<RealVector>* gradient);

/// Multi-restart first-order fit of the SIM phases to a target matrix.
/// Restart 0 starts from the stack's current phases, later restarts from
/// uniform random phases (Philox(subseed(seed, "fit-init"), stream =
/// restart)). Selection: lowest best loss, ties by restart index. The fitted
/// phases are written back into `sim`.
FitReport fit_transfer(SimStack& sim, const ComplexMatrix* pre, const ComplexMatrix& target,
                       const FitConfig& config);

/// Fits the end-to-end channel to a diagonal target (one feed per user).
/// When every layer carries a quantized HT2 profile the continuous solution
/// is projected once through quantize_phases and the post-projection loss is
/// reported; the projected phases are the returned configuration.
FitReport fit_sim_phases(BeamScenario& scenario, const ComplexMatrix& target,
                         const FitConfig& config);

/// Rectangular sampling plane for field maps, row-major points.
struct SamplingPlane
{
    std::vector<Vec3> points;
    int rows = 0;
    int cols = 0;
};

SamplingPlane make_sampling_plane(const Vec3& origin, const Vec3& axis_u, const Vec3& axis_v,
                                  double extent_u_m, double extent_v_m, int nu, int nv);

/// |near_field_response(point)^T w|^2 per sampling point for a directly
/// excited array (rows x cols map, row-major).
RealMatrix array_power_map(const PlanarGrid& grid, const SamplingPlane& plane,
                           const ComplexVector& weights, const CarrierSpec& carrier);

/// Received power map of the SIM output driven by the given feed weights.
/// Throws geometry_error when a sampling point lies inside the stack volume.
RealMatrix beam_power_map(const SimStack& sim, const SamplingPlane& plane,
                          const ComplexVector& feed_weights);

} // namespace wavestack
