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

#include "wavestack/optimizer.hpp"

#include <cmath>
#include <numbers>

#include "wavestack/errors.hpp"

namespace wavestack {

GradientDescent::GradientDescent(Eigen::Index dimension, const GradientDescentConfig& config)
    : config_(config), m_(RealVector::Zero(dimension)), v_(RealVector::Zero(dimension))
{
    if (!(config.step >= 0.0) || config.horizon < 1)
        throw validation_error("GradientDescent: step must be >= 0 and horizon >= 1");
}

double GradientDescent::current_step() const
{
    if (!config_.cosine_decay)
        return config_.step;
    const double progress = static_cast<double>(t_) / config_.horizon;
    return config_.step * 0.5 * (1.0 + std::cos(std::numbers::pi * std::min(progress, 1.0)));
}

void GradientDescent::update(RealVector& params, const RealVector& gradient)
{
    if (params.size() != m_.size() || gradient.size() != m_.size())
        throw dimension_error("GradientDescent::update: size mismatch");
    const double lr = current_step();
    ++t_;
    m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * gradient;
    v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * gradient.cwiseProduct(gradient);
    const double bc1 = 1.0 - std::pow(config_.beta1, t_);
    const double bc2 = 1.0 - std::pow(config_.beta2, t_);
    params.array() -= (lr / bc1) * m_.array() / ((v_ / bc2).array().sqrt() + config_.epsilon);
}

} // namespace wavestack
