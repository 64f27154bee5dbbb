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

#include "nfma/position_problem.hpp"

#include <memory>
#include <sstream>
#include <stdexcept>

namespace nfma
{

void PositionProblem::validate() const
{
    if (!(wavelength > 0.0))
        throw std::invalid_argument("PositionProblem: wavelength must be positive");
    if (num_tx == 0 || num_users() == 0)
        throw std::invalid_argument("PositionProblem: need at least one antenna and one user");
    if (rx_regions.size() != num_users() || budget.users() != num_users() ||
        budget.rate_targets.size() != num_users())
        throw std::invalid_argument("PositionProblem: per-user data size mismatch");
    if (!(min_spacing > 0.0))
        throw std::invalid_argument("PositionProblem: minimum spacing must be positive");
    drop.validate();
}

SearchSpace search_space(const PositionProblem &problem)
{
    SearchSpace space;
    auto push = [&](const RegionBox &box) {
        const Vec3 lo = box.lower(), hi = box.upper();
        for (int i = 0; i < 3; ++i)
        {
            space.lower.push_back(lo[i]);
            space.upper.push_back(hi[i]);
        }
    };
    for (std::size_t n = 0; n < problem.num_tx; ++n)
        push(problem.tx_region);
    if (problem.optimize_receivers)
        for (const auto &box : problem.rx_regions)
            push(box);
    return space;
}

SystemLayout decode_layout(const PositionProblem &problem, std::span<const double> u)
{
    if (u.size() != problem.dimension())
        throw std::invalid_argument("decode_layout: particle dimension mismatch");
    SystemLayout layout;
    layout.min_spacing = problem.min_spacing;
    layout.tx.reserve(problem.num_tx);
    for (std::size_t n = 0; n < problem.num_tx; ++n)
        layout.tx.emplace_back(u[3 * n], u[3 * n + 1], u[3 * n + 2]);

    const std::size_t base = 3 * problem.num_tx;
    for (std::size_t k = 0; k < problem.num_users(); ++k)
    {
        if (problem.optimize_receivers)
            layout.rx_local.emplace_back(u[base + 3 * k], u[base + 3 * k + 1], u[base + 3 * k + 2]);
        else
            layout.rx_local.push_back(problem.rx_regions[k].center);
        layout.user_origins.push_back(problem.drop.users[k].origin);
        layout.rotations.push_back(problem.drop.users[k].rotation);
    }
    return layout;
}

std::vector<double> encode_layout(const PositionProblem &problem, const SystemLayout &layout)
{
    std::vector<double> u;
    u.reserve(problem.dimension());
    for (const auto &t : layout.tx)
        u.insert(u.end(), {t.x(), t.y(), t.z()});
    if (problem.optimize_receivers)
        for (const auto &r : layout.rx_local)
            u.insert(u.end(), {r.x(), r.y(), r.z()});
    if (u.size() != problem.dimension())
        throw std::invalid_argument("encode_layout: layout does not match problem");
    return u;
}

BeamformingSolution solve_layout(const PositionProblem &problem, const SystemLayout &layout)
{
    const auto rx = layout.rx_global();
    const auto h = build_channels(problem.drop, layout.tx, rx, problem.wavelength);
    return minimize_power(h, problem.budget.sinr_targets(), problem.budget.noise_w, problem.solver);
}

FitnessBreakdown fitness(const PositionProblem &problem, std::span<const double> u, double penalty_factor)
{
    const SystemLayout layout = decode_layout(problem, u);
    FitnessBreakdown out;
    out.solution = solve_layout(problem, layout);
    out.power_w = out.solution.optimal() ? out.solution.total_power_w : kInfeasiblePowerW;
    out.violating = count_violating_antennas(layout.tx, problem.min_spacing);
    out.penalty = penalty_factor * static_cast<double>(out.violating);
    out.fitness = out.power_w + out.penalty;
    return out;
}

OptimizationOutcome optimize_positions(const PositionProblem &problem, const SwarmConfig &config)
{
    problem.validate();
    const SearchSpace space = search_space(problem);

    const FitnessFunction objective = [&](std::span<const double> u) {
        auto f = fitness(problem, u, config.penalty_factor);
        Evaluation e;
        e.fitness = f.fitness;
        e.penalty = f.penalty;
        e.payload = std::make_shared<const BeamformingSolution>(std::move(f.solution));
        return e;
    };
    const SwarmResult swarm = run_swarm(space, objective, config);

    OptimizationOutcome out;
    out.best_position = swarm.best_position;
    out.layout = decode_layout(problem, swarm.best_position);
    out.solution = *std::static_pointer_cast<const BeamformingSolution>(swarm.best.payload);
    out.best_fitness = swarm.best.fitness;
    out.penalty = swarm.best.penalty;
    out.trace = swarm.trace;
    out.evaluations = swarm.evaluations;
    out.initial_evaluations = swarm.initial_evaluations;

    std::ostringstream why;
    if (!out.solution.optimal())
        why << "beamforming subproblem " << to_string(out.solution.status) << " at best layout";
    const auto violating = count_violating_antennas(out.layout.tx, problem.min_spacing);
    if (violating > 0)
        why << (why.tellp() > 0 ? "; " : "") << violating << " transmit antennas closer than minimum spacing";
    out.diagnostic = why.str();
    out.success = out.diagnostic.empty();
    return out;
}

} // namespace nfma
