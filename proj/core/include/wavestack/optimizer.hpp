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

/// Gradient descent with per-parameter adaptive step scaling (Adam moment
/// estimates) and optional cosine step decay over a known horizon.
struct GradientDescentConfig
{
    double step = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    bool cosine_decay = true;
    int horizon = 1; // total planned iterations, used by the decay schedule
};

class GradientDescent
{
  public:
    GradientDescent(Eigen::Index dimension, const GradientDescentConfig& config);

    /// In-place update params -= lr_t * mhat / (sqrt(vhat) + eps).
    void update(RealVector& params, const RealVector& gradient);

    double current_step() const;
    int iteration() const { return t_; }

  private:
    GradientDescentConfig config_;
    RealVector m_;
    RealVector v_;
    int t_ = 0;
};

} // namespace wavestack
