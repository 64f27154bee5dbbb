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

#include <doctest.h>

#include <cmath>
#include <random>

#include "nfma/harness.hpp"
#include "nfma/oracle/validation.hpp"
#include "nfma/position_problem.hpp"

using namespace nfma;

namespace
{
constexpr double kLambda = 299'792'458.0 / 28e9;

PositionProblem single_user_problem(std::size_t num_tx)
{
    PositionProblem p;
    p.wavelength = kLambda;
    p.num_tx = num_tx;
    p.tx_region = RegionBox::square(Vec3::Zero(), 10 * kLambda);
    p.rx_regions = {RegionBox::square(Vec3::Zero(), kLambda)};
    p.drop.rician_factor = 1e12;
    UserDrop u;
    u.origin = {0, 100, 0};
    u.los_gain = free_space_amplitude(100.0, kLambda);
    p.drop.users = {u};
    p.budget = LinkBudget::uniform(1, -80.0, 3.0);
    p.min_spacing = kLambda / 2;
    p.optimize_receivers = false;
    return p;
}

PositionProblem scenario_problem(std::uint64_t seed, SchemeKind kind)
{
    Scenario s;
    s.num_tx = 4;
    s.num_users = 2;
    s.num_scatterers = 3;
    s.rate_target_bps_hz = 1.0;
    return make_problem(s, drop_scenario(s, seed), kind);
}
} // namespace

TEST_CASE("dimension and layout round trip")
{
    const auto p = scenario_problem(1, SchemeKind::Proposed);
    CHECK(p.dimension() == 3 * (4 + 2));
    const auto mabs = scenario_problem(1, SchemeKind::MaBs);
    CHECK(mabs.dimension() == 3 * 4);

    const SearchSpace space = search_space(p);
    REQUIRE(space.dimension() == p.dimension());
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::vector<double> u(p.dimension());
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = std::uniform_real_distribution<double>(space.lower[i], std::nextafter(space.upper[i], 1e9))(rng);
        const auto layout = decode_layout(p, u);
        CHECK(layout.tx.size() == 4);
        CHECK(layout.rx_local.size() == 2);
        CHECK(encode_layout(p, layout) == u);
    }
    CHECK_THROWS_AS(decode_layout(p, std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST_CASE("receivers stay at region centres when not optimised")
{
    const auto p = scenario_problem(2, SchemeKind::MaBs);
    const auto layout = decode_layout(p, std::vector<double>(p.dimension(), 0.0));
    for (std::size_t k = 0; k < p.num_users(); ++k)
        CHECK(layout.rx_local[k] == p.rx_regions[k].center);
}

TEST_CASE("single antenna single user fitness is the MRT power")
{
    const auto p = single_user_problem(1);
    const std::vector<double> u{0.0, 0.0, 0.0};
    const auto f = fitness(p, u, 100.0);
    const double gain2 = std::pow(p.drop.users[0].los_gain, 2) * 1e12 / (1e12 + 1);
    const double want = 7.0 * 1e-11 / gain2;
    CHECK(f.power_w == doctest::Approx(want).epsilon(1e-9));
    CHECK(f.penalty == 0.0);
    CHECK(f.fitness == f.power_w);
}

TEST_CASE("coincident transmit antennas pay the spacing penalty")
{
    const auto p = single_user_problem(2);
    const std::vector<double> u{0.01, 0.0, 0.01, 0.01, 0.0, 0.01};
    const auto f = fitness(p, u, 100.0);
    CHECK(f.violating == 2);
    CHECK(f.penalty == doctest::Approx(200.0));
    CHECK(f.fitness == doctest::Approx(f.power_w + 200.0));
}

TEST_CASE("feasible fitness equals the re-solved beamforming power")
{
    std::mt19937_64 rng(9);
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto p = scenario_problem(seed, SchemeKind::Proposed);
        const SearchSpace space = search_space(p);
        int checked = 0;
        for (int trial = 0; trial < 40 && checked < 5; ++trial)
        {
            std::vector<double> u(p.dimension());
            for (std::size_t i = 0; i < u.size(); ++i)
                u[i] = space.lower[i] + (space.upper[i] - space.lower[i]) *
                                            std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const auto f = fitness(p, u, 100.0);
            if (f.violating != 0 || !f.solution.optimal())
                continue;
            const auto again = solve_layout(p, decode_layout(p, u));
            CHECK(f.fitness == doctest::Approx(again.total_power_w).epsilon(1e-9));
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("successful optimisation is feasible and meets every rate")
{
    SwarmConfig cfg{.particles = 10, .iterations = 10};
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
    {
        const auto p = scenario_problem(seed, SchemeKind::Proposed);
        cfg.seed = seed;
        const auto out = optimize_positions(p, cfg);
        REQUIRE(out.success);
        CHECK(out.diagnostic.empty());
        CHECK(count_violating_antennas(out.layout.tx, p.min_spacing) == 0);
        const auto h = build_channels(p.drop, out.layout.tx, out.layout.rx_global(), p.wavelength);
        const auto ok = check_rate_constraints(h, out.solution.beamformers, p.budget.noise_w, p.budget.rate_targets);
        for (bool b : ok)
            CHECK(b);
        CHECK(out.best_fitness == doctest::Approx(out.solution.total_power_w).epsilon(1e-12));
        for (std::size_t q = 1; q < out.trace.size(); ++q)
            CHECK(out.trace[q].best_fitness <= out.trace[q - 1].best_fitness);
    }
}

TEST_CASE("problem validation")
{
    auto p = single_user_problem(2);
    CHECK_NOTHROW(p.validate());
    p.min_spacing = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = single_user_problem(2);
    p.rx_regions.clear();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("optimizer oracle suite")
{
    const auto report = oracle::validate_optimizer(1, 10);
    for (const auto &c : report.checks)
    {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
    }
}
