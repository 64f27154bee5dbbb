// SPDX-License-Identifier: Apache-2.0
//
// nfma: near-field movable-antenna multiuser downlink simulator
// Copyright (C) 2026 The nfma authors
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

#include <span>
#include <vector>

#include "nfma/channel.hpp"

namespace nfma::oracle
{

struct SocpResult
{
    bool converged = false;
    std::vector<CVec> beamformers;
    double total_power_w = 0.0;
    double duality_gap = 0.0; // bound on t - t* in the scaled problem
    int newton_steps = 0;
};

/// Minimum-power beamforming written as a second-order cone program and solved
/// with a log-barrier interior-point method:
///
///   minimise t
///   s.t.  ||[w_1; ...; w_K]|| <= t
///         ||[h_k^H w_i (i != k), sigma_k]|| <= Re(h_k^H w_k) / sqrt(gamma_k)
///         Im(h_k^H w_k) = 0
///
/// Equality-constrained Newton steps on t*mu + barrier, mu increased
/// geometrically until the barrier gap falls below `relative_gap` * t. The
/// start point is a scaled zero-forcing solution, so K <= N with linearly
/// independent channels is required.
SocpResult socp_min_power(std::span<const CVec> h, std::span<const double> sinr_targets,
                          std::span<const double> noise_w, double relative_gap = 1e-10);

} // namespace nfma::oracle
