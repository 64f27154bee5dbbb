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

#include "nfma/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nfma/geometry.hpp"
#include "nfma/parallel.hpp"
#include "nfma/rng.hpp"

namespace nfma
{

void SwarmConfig::validate() const
{
    if (particles < 1)
        throw std::invalid_argument("SwarmConfig: particles must be >= 1");
    if (iterations < 1)
        throw std::invalid_argument("SwarmConfig: iterations must be >= 1");
    if (!(pruning_ratio > 0.0 && pruning_ratio <= 1.0))
        throw std::invalid_argument("SwarmConfig: pruning_ratio must lie in (0, 1]");
    if (!(inertia_min <= inertia_max))
        throw std::invalid_argument("SwarmConfig: inertia_min > inertia_max");
    if (!(penalty_factor >= 0.0))
        throw std::invalid_argument("SwarmConfig: penalty_factor must be non-negative");
}

void SearchSpace::validate() const
{
    if (lower.size() != upper.size())
        throw std::invalid_argument("SearchSpace: bound dimension mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
            throw std::invalid_argument("SearchSpace: lower bound exceeds upper bound");
}

double inertia_weight(int q, int Q, double inertia_min, double inertia_max)
{
    return inertia_max - (inertia_max - inertia_min) * static_cast<double>(q) / static_cast<double>(Q);
}

int residual_count(int q, int P, double beta, int Q)
{
    if (Q <= 1)
        return P;
    const int floor_count = std::max(1, static_cast<int>(std::ceil(beta * P - 1e-9)));
    const double linear = P - (P - beta * P) * static_cast<double>(q - 1) / static_cast<double>(Q - 1);
    return std::max(floor_count, static_cast<int>(std::round(linear)));
}

std::vector<double> update_velocity(const Particle &p, std::span<const double> global_best, double inertia,
                                    double c1, double c2, std::span<const double> e1, std::span<const double> e2)
{
    const std::size_t d = p.position.size();
    if (p.velocity.size() != d || p.best_position.size() != d || global_best.size() != d || e1.size() != d ||
        e2.size() != d)
        throw std::invalid_argument("update_velocity: dimension mismatch");
    std::vector<double> v(d);
    for (std::size_t i = 0; i < d; ++i)
        v[i] = inertia * p.velocity[i] + c1 * e1[i] * (p.best_position[i] - p.position[i]) +
               c2 * e2[i] * (global_best[i] - p.position[i]);
    return v;
}

std::vector<double> update_velocity(const Particle &p, std::span<const double> global_best, double inertia,
                                    double c1, double c2, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t d = p.position.size();
    std::vector<double> e1(d), e2(d);
    for (std::size_t i = 0; i < d; ++i)
    {
        e1[i] = unit(rng);
        e2[i] = unit(rng);
    }
    return update_velocity(p, global_best, inertia, c1, c2, e1, e2);
}

void update_position(Particle &p, const SearchSpace &space)
{
    for (std::size_t i = 0; i < p.position.size(); ++i)
        p.position[i] += p.velocity[i];
    project_into_region_inplace(p.position, space.lower, space.upper);
}

namespace
{
double distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}
} // namespace

PruneOutcome prune_neighborhood(std::vector<Particle> &particles, std::span<const double> global_best,
                                std::size_t target, std::optional<std::size_t> protected_id)
{
    PruneOutcome out;
    if (target >= particles.size())
        return out;

    struct Candidate
    {
        double dist;
        std::size_t id;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(particles.size());
    for (const auto &p : particles)
        if (!protected_id || p.id != *protected_id)
            candidates.push_back({distance(p.position, global_best), p.id});
    std::sort(candidates.begin(), candidates.end(), [](const Candidate &a, const Candidate &b) {
        return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
    });

    const std::size_t remove = std::min(particles.size() - target, candidates.size());
    for (std::size_t i = 0; i < remove; ++i)
        out.removed_ids.push_back(candidates[i].id);
    if (remove > 0)
        out.radius = std::nextafter(candidates[remove - 1].dist, std::numeric_limits<double>::infinity());

    std::erase_if(particles, [&](const Particle &p) {
        return std::find(out.removed_ids.begin(), out.removed_ids.end(), p.id) != out.removed_ids.end();
    });
    return out;
}

SwarmResult run_swarm(const SearchSpace &space, const FitnessFunction &fitness, const SwarmConfig &config)
{
    config.validate();
    space.validate();
    const std::size_t dim = space.dimension();
    const auto P = static_cast<std::size_t>(config.particles);
    const int Q = config.iterations;

    std::vector<Particle> swarm(P);
    for (std::size_t p = 0; p < P; ++p)
    {
        auto rng = make_stream(config.seed, {0, p});
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Particle &particle = swarm[p];
        particle.id = p;
        particle.position.resize(dim);
        particle.velocity.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
        {
            const double span = space.upper[i] - space.lower[i];
            particle.position[i] = space.lower[i] + span * unit(rng);
            particle.velocity[i] = span * (unit(rng) - 0.5);
        }
        project_into_region_inplace(particle.position, space.lower, space.upper);
    }

    parallel_for(P, config.threads, [&](std::size_t p) { swarm[p].current = fitness(swarm[p].position); });

    SwarmResult result;
    std::size_t owner = 0;
    for (std::size_t p = 0; p < P; ++p)
    {
        swarm[p].best = swarm[p].current;
        swarm[p].best_position = swarm[p].position;
        if (swarm[p].current.fitness < swarm[owner].current.fitness)
            owner = p;
    }
    result.best = swarm[owner].best;
    result.best_position = swarm[owner].best_position;
    result.initial_evaluations = static_cast<long long>(P);
    result.evaluations = result.initial_evaluations;
    result.trace.push_back({0, static_cast<int>(P), result.best.fitness, result.best.penalty, result.evaluations});

    for (int q = 1; q <= Q; ++q)
    {
        const double inertia = inertia_weight(q, Q, config.inertia_min, config.inertia_max);
        const std::vector<double> global_best = result.best_position;

        parallel_for(swarm.size(), config.threads, [&](std::size_t i) {
            Particle &particle = swarm[i];
            auto rng = make_stream(config.seed, {static_cast<std::uint64_t>(q), particle.id});
            particle.velocity = update_velocity(particle, global_best, inertia, config.c1, config.c2, rng);
            update_position(particle, space);
            particle.current = fitness(particle.position);
        });

        for (auto &particle : swarm)
        {
            if (particle.current.fitness < particle.best.fitness)
            {
                particle.best = particle.current;
                particle.best_position = particle.position;
            }
            if (particle.current.fitness < result.best.fitness)
            {
                result.best = particle.current;
                result.best_position = particle.position;
                owner = particle.id;
            }
        }
        result.evaluations += static_cast<long long>(swarm.size());
        result.trace.push_back(
            {q, static_cast<int>(swarm.size()), result.best.fitness, result.best.penalty, result.evaluations});

        if (q < Q)
        {
            const int target = residual_count(q + 1, config.particles, config.pruning_ratio, Q);
            prune_neighborhood(swarm, result.best_position, static_cast<std::size_t>(target), owner);
        }
    }
    return result;
}

} // namespace nfma
