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
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace nfma
{

struct SwarmConfig
{
    int particles = 50;
    int iterations = 50;
    double pruning_ratio = 0.02; // residual fraction of the swarm at the last iteration
    double c1 = 1.4;
    double c2 = 1.4;
    double inertia_min = 0.4;
    double inertia_max = 0.9;
    double penalty_factor = 100.0;
    std::uint64_t seed = 1;
    unsigned threads = 1; // fitness workers; 0 = hardware concurrency

    void validate() const;
};

/// Box constraints of the search; equal bounds pin a coordinate.
struct SearchSpace
{
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const { return lower.size(); }
    void validate() const;
};

/// Outcome of one fitness evaluation. `penalty` is the part of `fitness`
/// coming from constraint violations; `payload` carries side products of the
/// evaluation (e.g. the beamformers) and travels with the personal and global
/// bests.
struct Evaluation
{
    double fitness = 0.0;
    double penalty = 0.0;
    std::shared_ptr<const void> payload;
};

using FitnessFunction = std::function<Evaluation(std::span<const double>)>;

struct Particle
{
    std::size_t id = 0;
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    Evaluation current;
    Evaluation best;
};

struct TraceRecord
{
    int iteration = 0;
    int residual_particles = 0;
    double best_fitness = 0.0;
    double penalty = 0.0;
    long long cumulative_evaluations = 0;
};

struct SwarmResult
{
    std::vector<double> best_position;
    Evaluation best;
    std::vector<TraceRecord> trace;
    long long evaluations = 0;         // including initialisation
    long long initial_evaluations = 0; // the P evaluations before the first iteration
};

// w_max - (w_max - w_min) q / Q
double inertia_weight(int q, int Q, double inertia_min, double inertia_max);

/// Residual particle count for iteration q (1-based) under the linear pruning
/// schedule from P down to beta P, rounded half away from zero and never below
/// max(1, ceil(beta P)).
int residual_count(int q, int P, double beta, int Q);

std::vector<double> update_velocity(const Particle &p, std::span<const double> global_best, double inertia,
                                    double c1, double c2, std::span<const double> e1, std::span<const double> e2);

// Draws e1, e2 ~ U[0,1]^d from rng.
std::vector<double> update_velocity(const Particle &p, std::span<const double> global_best, double inertia,
                                    double c1, double c2, std::mt19937_64 &rng);

// position <- clamp(position + velocity)
void update_position(Particle &p, const SearchSpace &space);

struct PruneOutcome
{
    std::vector<std::size_t> removed_ids;
    double radius = 0.0; // every removed particle lies strictly inside this distance
};

/// Removes the particles nearest to the global best until `target` remain.
/// Distance ties go to the lower particle id. The particle with id
/// `protected_id` (the current carrier of the global best) is never removed.
PruneOutcome prune_neighborhood(std::vector<Particle> &particles, std::span<const double> global_best,
                                std::size_t target, std::optional<std::size_t> protected_id = std::nullopt);

/// Two-loop dynamic-neighbourhood-pruning particle swarm.
///
/// Initialisation draws every particle uniformly inside the box with velocity
/// uniform in +-(upper - lower)/2 and evaluates all P of them. Each outer
/// iteration q = 1..Q updates velocities and positions of the residual swarm
/// against the global best of the previous iteration, evaluates them (in
/// parallel when configured), updates personal/global bests in particle order,
/// then prunes down to residual_count(q + 1). With pruning_ratio = 1 this is
/// standard PSO.
///
/// Random draws come from per-(particle, iteration) streams derived from
/// config.seed, so results do not depend on the number of worker threads.
SwarmResult run_swarm(const SearchSpace &space, const FitnessFunction &fitness, const SwarmConfig &config);

} // namespace nfma
