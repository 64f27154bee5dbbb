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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nfma/channel.hpp"

namespace nfma
{

/// Per-user noise powers (watts) and rate requirements (bps/Hz).
struct LinkBudget
{
    std::vector<double> noise_w;
    std::vector<double> rate_targets;

    static LinkBudget uniform(std::size_t users, double noise_dbm, double rate_target);
    std::vector<double> sinr_targets() const;
    std::size_t users() const { return noise_w.size(); }
};

enum class SolverStatus
{
    Optimal,
    Infeasible,
    MaxIterations,
};

std::string_view to_string(SolverStatus status);

struct BeamformingSolution
{
    std::vector<CVec> beamformers;
    double total_power_w = 0.0;
    std::vector<double> achieved_sinr;
    SolverStatus status = SolverStatus::Infeasible;
    int iterations = 0;

    bool optimal() const { return status == SolverStatus::Optimal; }
};

double sinr(std::span<const CVec> h, std::span<const CVec> w, std::span<const double> noise_w, std::size_t k);
std::vector<double> sinr_all(std::span<const CVec> h, std::span<const CVec> w, std::span<const double> noise_w);

double achievable_rate(double sinr);

struct DualitySolverOptions
{
    int max_iterations = 20000;
    // Stop once the dual uplink powers change by less than this (relative).
    double tolerance = 1e-12;
    // Dual powers beyond this multiple of the interference-free lower bound
    // are taken as divergence of the fixed point.
    double divergence_ratio = 1e12;
};

/// Minimum-power downlink beamforming under per-user SINR targets.
///
/// Solved through uplink-downlink duality: the virtual uplink powers q are
/// iterated to the fixed point q_k = gamma_k / (g_k^H S_k(q)^-1 g_k) with
/// S_k(q) = I + sum_{i != k} q_i g_i g_i^H and g_k = h_k / sigma_k. The MMSE
/// receivers at the fixed point are the optimal downlink directions; downlink
/// powers then follow from a K x K linear system that makes every SINR
/// constraint hold with equality.
///
/// Each w_k is phase-rotated so that h_k^H w_k is real and non-negative.
BeamformingSolution minimize_power(std::span<const CVec> h, std::span<const double> sinr_targets,
                                   std::span<const double> noise_w, const DualitySolverOptions &options = {});

/// Downlink powers that make every SINR constraint active for fixed unit-norm
/// directions. Empty result if no non-negative solution exists.
std::vector<double> powers_for_directions(std::span<const CVec> h, std::span<const CVec> directions,
                                          std::span<const double> sinr_targets, std::span<const double> noise_w);

// Per-user flag: log2(1 + sinr_k) >= rate_target_k - 1e-9.
std::vector<bool> check_rate_constraints(std::span<const CVec> h, std::span<const CVec> w,
                                         std::span<const double> noise_w, std::span<const double> rate_targets);

} // namespace nfma
