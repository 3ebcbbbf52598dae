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

#include "wavestack/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "wavestack/errors.hpp"
#include "wavestack/optimizer.hpp"
#include "wavestack/philox.hpp"

namespace wavestack {

namespace {

void parallel_for(int count, int jobs, const std::function<void(int)>& body)
{
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1)
    {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&, w]() {
            for (int i = w; i < count; i += jobs)
                body(i);
        });
    for (auto& t : workers)
        t.join();
}

ComplexVector layer_transmission(const MetasurfaceLayer& layer, const RealVector& phases)
{
    ComplexVector t(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        t(i) = std::polar(layer.amplitudes(i), phases(i));
    return t;
}

} // namespace

void BeamScenario::validate() const
{
    sim.validate();
    if (user_positions.empty())
        throw validation_error("BeamScenario: at least one user required");
    if (static_cast<int>(user_positions.size()) > sim.num_feeds())
        throw validation_error("BeamScenario: more users than feed antennas");
    if (!(total_power > 0.0))
        throw validation_error("BeamScenario: total power must be positive");
    for (std::size_t i = 0; i < user_positions.size(); ++i)
        for (std::size_t j = i + 1; j < user_positions.size(); ++j)
            if ((user_positions[i] - user_positions[j]).norm() < 1e-9)
                throw validation_error("BeamScenario: duplicate user positions");
}

ComplexMatrix user_channel(const BeamScenario& scenario)
{
    const PlanarGrid& grid = scenario.sim.output_grid();
    const int users = static_cast<int>(scenario.user_positions.size());
    if (scenario.channel_mode == ChannelMode::correlated_rayleigh)
        return sample_correlated_rayleigh(grid, users, scenario.pathloss,
                                          scenario.channel_seed, scenario.sim.carrier)
            .matrix;
    ComplexMatrix h(users, grid.size());
    for (int u = 0; u < users; ++u)
        h.row(u) = near_field_response(grid, scenario.user_positions[static_cast<std::size_t>(u)],
                                       scenario.sim.carrier)
                       .transpose();
    return h;
}

ComplexMatrix end_to_end_channel(const SimStack& sim, const ComplexMatrix& h_user)
{
    if (h_user.cols() != sim.output_size())
        throw dimension_error("end_to_end_channel: channel columns != output aperture size");
    return h_user * transfer_matrix(sim);
}

double normalized_fit_loss(const ComplexMatrix& achieved, const ComplexMatrix& target)
{
    const double na = achieved.norm();
    const double nt = target.norm();
    if (!(na > 0.0) || !(nt > 0.0))
        throw std::runtime_error("normalized_fit_loss: zero-norm matrix");
    return (achieved / na - target / nt).squaredNorm();
}

RealVector per_user_sinr_db(const ComplexMatrix& end_to_end, double total_power)
{
    const Eigen::Index users = end_to_end.rows();
    const double feed_power = total_power / static_cast<double>(end_to_end.cols());
    RealVector sinr(users);
    for (Eigen::Index u = 0; u < users; ++u)
    {
        const double signal = feed_power * std::norm(end_to_end(u, u));
        double interference = 0.0;
        for (Eigen::Index f = 0; f < end_to_end.cols(); ++f)
            if (f != u)
                interference += feed_power * std::norm(end_to_end(u, f));
        sinr(u) = 10.0 * std::log10(signal / (interference + 1.0));
    }
    return sinr;
}

double leakage_fraction(const ComplexMatrix& end_to_end)
{
    double off = 0.0;
    double total = 0.0;
    for (Eigen::Index u = 0; u < end_to_end.rows(); ++u)
        for (Eigen::Index f = 0; f < end_to_end.cols(); ++f)
        {
            const double p = std::norm(end_to_end(u, f));
            total += p;
            if (f != u)
                off += p;
        }
    return total > 0.0 ? off / total : 0.0;
}

double fit_loss_and_gradient(const SimStack& sim, const ComplexMatrix* pre,
                             const ComplexMatrix& target,
                             const std::vector<RealVector>& phases,
                             std::vector<RealVector>* gradient)
{
    const int num_layers = sim.num_layers();
    if (static_cast<int>(phases.size()) != num_layers)
        throw dimension_error("fit_loss_and_gradient: phase vector count mismatch");

    // forward partials: incoming[l] is the field matrix arriving at layer l
    // (before its transmission), per feed excitation
    std::vector<ComplexMatrix> incoming(static_cast<std::size_t>(num_layers));
    std::vector<ComplexVector> phi(static_cast<std::size_t>(num_layers));
    for (int l = 0; l < num_layers; ++l)
        phi[static_cast<std::size_t>(l)] =
            layer_transmission(sim.layers[static_cast<std::size_t>(l)],
                               phases[static_cast<std::size_t>(l)]);

    const int feeds = sim.num_feeds();
    if (sim.input_operator)
        incoming[0] = sim.input_operator->matrix;
    else
        incoming[0] = ComplexMatrix::Identity(feeds, feeds);
    for (int l = 1; l < num_layers; ++l)
        incoming[static_cast<std::size_t>(l)] =
            sim.interlayer_operators[static_cast<std::size_t>(l) - 1].matrix *
            (phi[static_cast<std::size_t>(l) - 1].asDiagonal() *
             incoming[static_cast<std::size_t>(l) - 1]);

    const ComplexMatrix transfer =
        phi[static_cast<std::size_t>(num_layers) - 1].asDiagonal() *
        incoming[static_cast<std::size_t>(num_layers) - 1];
    const ComplexMatrix achieved = pre ? ComplexMatrix(*pre * transfer) : transfer;

    if (achieved.rows() != target.rows() || achieved.cols() != target.cols())
        throw dimension_error("fit_loss_and_gradient: target shape mismatch");

    const double norm_a = achieved.norm();
    const double norm_t = target.norm();
    if (!(norm_a > 0.0) || !std::isfinite(norm_a))
        throw std::runtime_error("fit_loss_and_gradient: non-finite or zero cascade output");
    const ComplexMatrix that = target / norm_t;
    const double overlap = (that.conjugate().cwiseProduct(achieved)).sum().real();
    const double loss = 2.0 - 2.0 * overlap / norm_a;

    if (gradient == nullptr)
        return loss;

    // dL = 2 Re <G, dE> with G = -(that - overlap/norm^2 * E) / norm
    const ComplexMatrix g = -(that - (overlap / (norm_a * norm_a)) * achieved) / norm_a;

    gradient->resize(static_cast<std::size_t>(num_layers));
    // backward sweep propagating the adjoint applied to G, N_l x feeds at
    // every step: b_l = (pre Phi_L W_L ... W_{l+1})^H G
    ComplexMatrix b = pre ? ComplexMatrix(pre->adjoint() * g) : g;
    for (int l = num_layers - 1; l >= 0; --l)
    {
        const ComplexVector rowsum =
            (b.conjugate().cwiseProduct(incoming[static_cast<std::size_t>(l)])).rowwise().sum();
        RealVector grad_l(rowsum.size());
        for (Eigen::Index i = 0; i < rowsum.size(); ++i)
            grad_l(i) = -2.0 * (phi[static_cast<std::size_t>(l)](i) * rowsum(i)).imag();
        (*gradient)[static_cast<std::size_t>(l)] = std::move(grad_l);
        if (l > 0)
            b = sim.interlayer_operators[static_cast<std::size_t>(l) - 1].matrix.adjoint() *
                ComplexMatrix(phi[static_cast<std::size_t>(l)].conjugate().asDiagonal() * b);
    }
    return loss;
}

namespace {

struct RestartResult
{
    double best_loss = std::numeric_limits<double>::infinity();
    std::vector<RealVector> best_phases;
    RealVector trace;
    int iterations = 0;
};

RestartResult run_restart(const SimStack& sim, const ComplexMatrix* pre,
                          const ComplexMatrix& target, const FitConfig& config,
                          std::vector<RealVector> phases)
{
    const int num_layers = sim.num_layers();
    Eigen::Index dim = 0;
    for (const auto& p : phases)
        dim += p.size();

    GradientDescentConfig gd_config;
    gd_config.step = config.step;
    gd_config.horizon = std::max(1, config.iterations);
    GradientDescent optimizer(dim, gd_config);

    RestartResult result;
    result.best_phases = phases;
    result.trace.resize(config.iterations);

    RealVector flat(dim);
    std::vector<RealVector> gradient;
    int it = 0;
    for (; it < config.iterations; ++it)
    {
        const double loss = fit_loss_and_gradient(sim, pre, target, phases, &gradient);
        result.trace(it) = loss;
        if (loss < result.best_loss)
        {
            result.best_loss = loss;
            result.best_phases = phases;
        }
        if (loss <= config.zero_loss_tolerance)
        {
            ++it;
            break;
        }

        Eigen::Index offset = 0;
        RealVector flat_grad(dim);
        for (int l = 0; l < num_layers; ++l)
        {
            const auto& p = phases[static_cast<std::size_t>(l)];
            flat.segment(offset, p.size()) = p;
            flat_grad.segment(offset, p.size()) = gradient[static_cast<std::size_t>(l)];
            offset += p.size();
        }
        optimizer.update(flat, flat_grad);
        offset = 0;
        for (int l = 0; l < num_layers; ++l)
        {
            auto& p = phases[static_cast<std::size_t>(l)];
            p = flat.segment(offset, p.size());
            offset += p.size();
        }
    }
    // account for the last update
    const double final_loss = fit_loss_and_gradient(sim, pre, target, phases, nullptr);
    if (final_loss < result.best_loss)
    {
        result.best_loss = final_loss;
        result.best_phases = phases;
    }
    result.iterations = it;
    result.trace.conservativeResize(it);
    return result;
}

} // namespace

FitReport fit_transfer(SimStack& sim, const ComplexMatrix* pre, const ComplexMatrix& target,
                       const FitConfig& config)
{
    if (config.restarts < 1 || config.iterations < 0)
        throw validation_error("fit_transfer: need restarts >= 1 and iterations >= 0");
    sim.validate();

    const std::uint64_t init_seed = Philox::derive_subseed(config.seed, "fit-init");
    std::vector<RestartResult> results(static_cast<std::size_t>(config.restarts));
    const std::vector<RealVector> initial = sim.phases();

    parallel_for(config.restarts, config.jobs, [&](int r) {
        std::vector<RealVector> phases;
        if (r == 0)
        {
            phases = initial;
        }
        else
        {
            Philox rng(init_seed, static_cast<std::uint64_t>(r));
            for (const auto& layer : sim.layers)
            {
                RealVector p(layer.grid.size());
                for (Eigen::Index i = 0; i < p.size(); ++i)
                    p(i) = rng.next_phase();
                phases.push_back(std::move(p));
            }
        }
        results[static_cast<std::size_t>(r)] =
            run_restart(sim, pre, target, config, std::move(phases));
    });

    int best = 0;
    for (int r = 1; r < config.restarts; ++r)
        if (results[static_cast<std::size_t>(r)].best_loss <
            results[static_cast<std::size_t>(best)].best_loss)
            best = r;

    const RestartResult& winner = results[static_cast<std::size_t>(best)];
    FitReport report;
    report.iterations = winner.iterations;
    report.loss_trace = winner.trace;
    report.final_phases = winner.best_phases;
    report.final_loss = winner.best_loss;
    report.best_restart = best;
    for (const auto& r : results)
        report.restart_losses.push_back(r.best_loss);

    sim.set_phases(winner.best_phases);
    return report;
}

FitReport fit_sim_phases(BeamScenario& scenario, const ComplexMatrix& target,
                         const FitConfig& config)
{
    scenario.validate();
    const int users = static_cast<int>(scenario.user_positions.size());
    if (target.rows() != users || target.cols() != scenario.sim.num_feeds())
        throw dimension_error("fit_sim_phases: target must be users x feeds");
    for (Eigen::Index u = 0; u < target.rows(); ++u)
        for (Eigen::Index f = 0; f < target.cols(); ++f)
            if (u != f && target(u, f) != Complex(0.0, 0.0))
                throw validation_error("fit_sim_phases: target must be diagonal "
                                       "(one feed per user)");

    const ComplexMatrix h_user = user_channel(scenario);
    FitReport report = fit_transfer(scenario.sim, &h_user, target, config);

    // quantized HT2 stacks: project once after continuous convergence
    const bool quantized = std::all_of(
        scenario.sim.layers.begin(), scenario.sim.layers.end(), [](const MetasurfaceLayer& l) {
            return l.profile.kind == HardwareType::HT2_passive_programmable &&
                   l.profile.phase_bits.has_value();
        });
    if (quantized)
    {
        for (auto& layer : scenario.sim.layers)
            layer = quantize_phases(layer, *layer.profile.phase_bits);
        report.final_phases = scenario.sim.phases();
        report.projected_loss = normalized_fit_loss(
            end_to_end_channel(scenario.sim, h_user), target);
    }

    const ComplexMatrix achieved = end_to_end_channel(scenario.sim, h_user);
    report.per_user_sinr_db = per_user_sinr_db(achieved, scenario.total_power);
    report.leakage = leakage_fraction(achieved);
    return report;
}

SamplingPlane make_sampling_plane(const Vec3& origin, const Vec3& axis_u, const Vec3& axis_v,
                                  double extent_u_m, double extent_v_m, int nu, int nv)
{
    if (nu < 1 || nv < 1)
        throw validation_error("make_sampling_plane: need at least one point per axis");
    SamplingPlane plane;
    plane.rows = nv;
    plane.cols = nu;
    plane.points.reserve(static_cast<std::size_t>(nu) * nv);
    for (int r = 0; r < nv; ++r)
        for (int c = 0; c < nu; ++c)
        {
            const double fu = nu > 1 ? static_cast<double>(c) / (nu - 1) - 0.5 : 0.0;
            const double fv = nv > 1 ? static_cast<double>(r) / (nv - 1) - 0.5 : 0.0;
            plane.points.push_back(origin + fu * extent_u_m * axis_u + fv * extent_v_m * axis_v);
        }
    return plane;
}

RealMatrix array_power_map(const PlanarGrid& grid, const SamplingPlane& plane,
                           const ComplexVector& weights, const CarrierSpec& carrier)
{
    if (weights.size() != grid.size())
        throw dimension_error("array_power_map: weights must match grid size");
    RealMatrix map(plane.rows, plane.cols);
    for (int r = 0; r < plane.rows; ++r)
        for (int c = 0; c < plane.cols; ++c)
        {
            const Vec3& p = plane.points[static_cast<std::size_t>(r) * plane.cols + c];
            const Complex field = near_field_response(grid, p, carrier).transpose() * weights;
            map(r, c) = std::norm(field);
        }
    return map;
}

RealMatrix beam_power_map(const SimStack& sim, const SamplingPlane& plane,
                          const ComplexVector& feed_weights)
{
    if (feed_weights.size() != sim.num_feeds())
        throw dimension_error("beam_power_map: feed weights must match feed count");

    // stack bounding box, inflated by one pitch
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    double pad = 0.0;
    auto absorb = [&](const PlanarGrid& grid) {
        for (const auto& p : grid.element_positions)
        {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        pad = std::max(pad, grid.pitch_m);
    };
    for (const auto& layer : sim.layers)
        absorb(layer.grid);
    if (sim.feed_grid)
        absorb(*sim.feed_grid);
    lo.array() -= pad;
    hi.array() += pad;
    for (const auto& p : plane.points)
        if ((p.array() >= lo.array()).all() && (p.array() <= hi.array()).all())
            throw geometry_error("beam_power_map: sampling point inside the stack volume");

    const ComplexVector output = transfer_matrix(sim) * feed_weights;
    return array_power_map(sim.output_grid(), plane, output, sim.carrier);
}

} // namespace wavestack
