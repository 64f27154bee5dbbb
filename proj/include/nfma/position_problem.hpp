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
#include <string>
#include <vector>

#include "nfma/beamforming.hpp"
#include "nfma/channel.hpp"
#include "nfma/geometry.hpp"
#include "nfma/swarm.hpp"

namespace nfma
{

// Stand-in for W(u) when the beamforming subproblem has no valid solution.
inline constexpr double kInfeasiblePowerW = 1e6;

/// Everything the fitness needs besides the particle position.
///
/// Particle vectors are laid out as [t_1, ..., t_N, r~_1, ..., r~_K] with
/// three coordinates per antenna. When `optimize_receivers` is false only the
/// 3N transmit coordinates are searched and every r~_k sits at its region
/// centre.
struct PositionProblem
{
    double wavelength = 0.0;
    std::size_t num_tx = 0;
    RegionBox tx_region;
    std::vector<RegionBox> rx_regions; // local frames
    ChannelDrop drop;
    LinkBudget budget;
    double min_spacing = 0.0;
    bool optimize_receivers = true;
    DualitySolverOptions solver;

    std::size_t num_users() const { return drop.users.size(); }
    std::size_t dimension() const { return 3 * (num_tx + (optimize_receivers ? num_users() : 0)); }
    void validate() const;
};

SearchSpace search_space(const PositionProblem &problem);
SystemLayout decode_layout(const PositionProblem &problem, std::span<const double> u);
std::vector<double> encode_layout(const PositionProblem &problem, const SystemLayout &layout);

/// Channels and minimum-power beamformers for a concrete layout.
BeamformingSolution solve_layout(const PositionProblem &problem, const SystemLayout &layout);

struct FitnessBreakdown
{
    double fitness = 0.0;
    double power_w = 0.0;    // W(u), or kInfeasiblePowerW
    double penalty = 0.0;    // tau * violating antennas
    std::size_t violating = 0;
    BeamformingSolution solution;
};

// F(u) = W(u) + tau * delta(t)
FitnessBreakdown fitness(const PositionProblem &problem, std::span<const double> u, double penalty_factor);

struct OptimizationOutcome
{
    bool success = false;
    std::string diagnostic;
    std::vector<double> best_position;
    SystemLayout layout;
    BeamformingSolution solution;
    double best_fitness = 0.0;
    double penalty = 0.0;
    std::vector<TraceRecord> trace;
    long long evaluations = 0;
    long long initial_evaluations = 0;
};

/// Runs the two-loop search over antenna positions. Success requires an
/// optimal beamforming solution at the returned layout and no spacing
/// violations; otherwise `diagnostic` says what went wrong.
OptimizationOutcome optimize_positions(const PositionProblem &problem, const SwarmConfig &config);

} // namespace nfma
