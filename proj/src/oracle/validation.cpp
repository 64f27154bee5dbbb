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

#include "nfma/oracle/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include "nfma/beamforming.hpp"
#include "nfma/channel.hpp"
#include "nfma/harness.hpp"
#include "nfma/oracle/reference.hpp"
#include "nfma/oracle/socp_barrier.hpp"
#include "nfma/result_io.hpp"
#include "nfma/rng.hpp"
#include "nfma/swarm.hpp"
#include "nfma/units.hpp"

namespace nfma::oracle
{

bool ValidationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

namespace
{

std::string fmt(double v)
{
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

bool bit_equal(const std::vector<CVec> &a, const std::vector<CVec> &b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        if (a[k].size() != b[k].size())
            return false;
        if (std::memcmp(a[k].data(), b[k].data(), sizeof(cdouble) * static_cast<std::size_t>(a[k].size())) != 0)
            return false;
    }
    return true;
}

std::vector<Vec3> random_positions(std::mt19937_64 &rng, std::size_t n, double half)
{
    std::uniform_real_distribution<double> u(-half, half);
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(u(rng), 0.0, u(rng));
    return out;
}

} // namespace

ValidationReport validate_channel(std::uint64_t seed)
{
    ValidationReport report{"channel", {}};
    const Scenario scenario;
    const double lambda = scenario.wavelength();
    auto rng = make_stream(seed, {0xC4A7});

    {
        double worst = 0.0;
        std::uniform_real_distribution<double> far(-300.0, 300.0);
        for (int trial = 0; trial < 200; ++trial)
        {
            const auto tx = random_positions(rng, 8, 50.0 * lambda);
            const Vec3 x(far(rng), far(rng), far(rng));
            const CVec a = steering_vector(tx, x, lambda);
            for (Eigen::Index n = 0; n < a.size(); ++n)
                worst = std::max(worst, std::abs(std::abs(a[n]) - 1.0));
        }
        report.checks.push_back({"steering entries unit modulus", worst <= 1e-12, "max | |a_n| - 1 | = " + fmt(worst)});
    }

    {
        // Unit gains so that the LoS and mean NLoS powers are both N; the
        // expected shares are then exactly k/(k+1) and 1/(k+1).
        const ScenarioDrop drop = drop_scenario(scenario, seed);
        UserDrop user = drop.channel.users.front();
        user.los_gain = 1.0;
        for (auto &s : user.scatterers)
        {
            s.gain_bs = 1.0;
            s.gain_user = 1.0;
        }
        const double kappa = drop.channel.rician_factor;
        const auto tx = random_positions(rng, 4, 50.0 * lambda);
        const Vec3 rx = user.origin;
        const double n = static_cast<double>(tx.size());
        const CVec los = los_component(tx, rx, user.los_gain, lambda);

        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
        const int samples = 20000;
        double los_power = 0.0, nlos_power = 0.0, total_power = 0.0;
        for (int s = 0; s < samples; ++s)
        {
            for (auto &sc : user.scatterers)
                sc.reflection = cdouble(gauss(rng), gauss(rng));
            const CVec nlos = nlos_component(tx, user, rx, lambda);
            const CVec h = assemble_channel(los, nlos, kappa);
            los_power += (kappa / (kappa + 1.0)) * los.squaredNorm();
            nlos_power += nlos.squaredNorm() / (kappa + 1.0);
            total_power += h.squaredNorm();
        }
        los_power /= samples * n;
        nlos_power /= samples * n;
        total_power /= samples * n;
        const double want_los = kappa / (kappa + 1.0);
        const double want_nlos = 1.0 / (kappa + 1.0);
        const double err_los = std::abs(los_power / want_los - 1.0);
        const double err_nlos = std::abs(nlos_power / want_nlos - 1.0);
        const double err_total = std::abs(total_power - 1.0);
        report.checks.push_back({"Rician power split (Monte Carlo, 2e4 draws)",
                                 err_los <= 0.02 && err_nlos <= 0.02 && err_total <= 0.02,
                                 "LoS share " + fmt(los_power) + " vs " + fmt(want_los) + ", NLoS share " +
                                     fmt(nlos_power) + " vs " + fmt(want_nlos) + ", total " + fmt(total_power)});
    }

    {
        const ScenarioDrop a = drop_scenario(scenario, seed);
        const ScenarioDrop b = drop_scenario(scenario, seed);
        const auto tx = uniform_linear_array(static_cast<std::size_t>(scenario.num_tx), 0.5 * lambda);
        std::vector<Vec3> rx;
        for (const auto &u : a.channel.users)
            rx.push_back(u.origin);
        const auto ha = build_channels(a.channel, tx, rx, lambda);
        const auto hb = build_channels(b.channel, tx, rx, lambda);
        const ScenarioDrop replayed = parse_drop_json(format_drop_json(a));
        const auto hr = build_channels(replayed.channel, tx, rx, lambda);
        const bool same = bit_equal(ha, hb);
        const bool replay = bit_equal(ha, hr);
        report.checks.push_back({"determinism replay bit-exact", same && replay,
                                 std::string("rebuild ") + (same ? "identical" : "differs") + ", JSON replay " +
                                     (replay ? "identical" : "differs")});
    }
    return report;
}

ValidationReport validate_beamforming(std::uint64_t seed, int instances)
{
    ValidationReport report{"beamforming", {}};
    auto rng = make_stream(seed, {0xBEAF});

    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial)
        {
            RandomInstance inst = random_instance(rng, 1, 8);
            const auto sol = minimize_power(inst.h, inst.sinr_targets, inst.noise_w);
            const double closed = inst.sinr_targets[0] * inst.noise_w[0] / inst.h[0].squaredNorm();
            const double err = sol.optimal() ? std::abs(sol.total_power_w / closed - 1.0) : 1.0;
            worst = std::max(worst, err);
        }
        report.checks.push_back({"single-user MRT closed form", worst <= 1e-9, "max relative error " + fmt(worst)});
    }

    {
        double worst = 0.0, worst_active = 0.0;
        int compared = 0, failures = 0;
        for (int i = 0; i < instances; ++i)
        {
            RandomInstance inst = random_instance(rng, 4, 8);
            const auto sol = minimize_power(inst.h, inst.sinr_targets, inst.noise_w);
            const auto ref = socp_min_power(inst.h, inst.sinr_targets, inst.noise_w);
            if (!sol.optimal() || !ref.converged)
            {
                ++failures;
                continue;
            }
            ++compared;
            worst = std::max(worst, std::abs(sol.total_power_w / ref.total_power_w - 1.0));
            for (std::size_t k = 0; k < inst.h.size(); ++k)
                worst_active = std::max(worst_active, std::abs(sol.achieved_sinr[k] / inst.sinr_targets[k] - 1.0));
        }
        report.checks.push_back({"duality vs conic oracle on random instances",
                                 failures == 0 && worst <= 1e-4,
                                 std::to_string(compared) + " compared, " + std::to_string(failures) +
                                     " not solved, max relative gap " + fmt(worst)});
        report.checks.push_back({"SINR constraints active at optimum", failures == 0 && worst_active <= 1e-5,
                                 "max relative slack " + fmt(worst_active)});
    }

    {
        double worst = 0.0;
        int failures = 0;
        for (int trial = 0; trial < 5; ++trial)
        {
            RandomInstance inst;
            do
                inst = random_instance(rng, 2, 2);
            while (inst.h.size() != 2 || inst.h[0].size() != 2);
            const auto sol = minimize_power(inst.h, inst.sinr_targets, inst.noise_w);
            const double grid = grid_search_two_user_power(inst.h, inst.sinr_targets, inst.noise_w, 24);
            if (!sol.optimal() || !std::isfinite(grid))
            {
                ++failures;
                continue;
            }
            worst = std::max(worst, std::abs(sol.total_power_w / grid - 1.0));
        }
        report.checks.push_back({"two-user direction grid search", failures == 0 && worst <= 1e-6,
                                 "max relative gap " + fmt(worst)});
    }
    return report;
}

ValidationReport validate_optimizer(std::uint64_t seed, int tiny_seeds)
{
    ValidationReport report{"optimizer", {}};

    {
        Scenario tiny;
        tiny.num_tx = 2;
        tiny.num_users = 1;
        tiny.num_scatterers = 0;
        tiny.tx_region_wavelengths = 10.0;
        tiny.rx_region_wavelengths = 0.0;
        tiny.rician_factor_db = 200.0; // LoS only: k/(k+1) rounds to 1
        const double lambda = tiny.wavelength();
        int within = 0;
        double worst = 0.0;
        for (int i = 0; i < tiny_seeds; ++i)
        {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
            const ScenarioDrop drop = drop_scenario(tiny, s);
            const auto run = run_scheme(SchemeKind::Proposed, tiny, tiny.swarm, drop);
            const auto &user = drop.channel.users.front();
            const auto grid = tiny_grid_optimum(
                tiny.tx_region_wavelengths * lambda, lambda / 50.0, user.origin, user.los_gain,
                drop.channel.rician_factor, lambda, rate_to_sinr(tiny.rate_target_bps_hz),
                dbm_to_watts(tiny.noise_power_dbm), tiny.min_spacing_wavelengths * lambda);
            const double gap = run.feasible ? run.power_dbm - watts_to_dbm(grid.power_w) : INFINITY;
            worst = std::max(worst, gap);
            if (gap <= 0.2)
                ++within;
        }
        report.checks.push_back({"tiny instance against grid optimum", within * 10 >= tiny_seeds * 9,
                                 std::to_string(within) + "/" + std::to_string(tiny_seeds) +
                                     " seeds within 0.2 dB, worst excess " + fmt(worst) + " dB"});
    }

    {
        auto rng = make_stream(seed, {0x5027});
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        int mismatches = 0;
        for (int trial = 0; trial < 200; ++trial)
        {
            const std::size_t count = 2 + static_cast<std::size_t>(trial % 30);
            const std::size_t dim = 1 + static_cast<std::size_t>(trial % 5);
            std::vector<Particle> swarm(count);
            for (std::size_t i = 0; i < count; ++i)
            {
                swarm[i].id = i;
                swarm[i].position.resize(dim);
                for (auto &x : swarm[i].position)
                    x = trial % 3 == 0 ? std::round(2.0 * u(rng)) : u(rng); // coarse values force ties
            }
            std::vector<double> gbest(dim);
            for (auto &x : gbest)
                x = trial % 3 == 0 ? 0.0 : u(rng);
            const std::size_t target = 1 + static_cast<std::size_t>(trial) % count;
            const std::optional<std::size_t> keep =
                trial % 2 ? std::optional<std::size_t>(static_cast<std::size_t>(trial) % count) : std::nullopt;

            // Oracle: sort (distance, id), drop the protected particle, take the head.
            std::vector<std::pair<double, std::size_t>> order;
            for (const auto &p : swarm)
            {
                if (keep && p.id == *keep)
                    continue;
                double d2 = 0.0;
                for (std::size_t j = 0; j < dim; ++j)
                    d2 += (p.position[j] - gbest[j]) * (p.position[j] - gbest[j]);
                order.emplace_back(std::sqrt(d2), p.id);
            }
            std::sort(order.begin(), order.end());
            std::vector<std::size_t> expected;
            for (std::size_t i = 0; i < count - target; ++i)
                expected.push_back(order[i].second);
            std::sort(expected.begin(), expected.end());

            auto copy = swarm;
            auto outcome = prune_neighborhood(copy, gbest, target, keep);
            std::sort(outcome.removed_ids.begin(), outcome.removed_ids.end());
            if (outcome.removed_ids != expected || copy.size() != target)
                ++mismatches;
        }
        report.checks.push_back({"pruning matches sort oracle", mismatches == 0,
                                 std::to_string(mismatches) + " mismatches in 200 random swarms"});
    }

    {
        const std::size_t dim = 6;
        SearchSpace space{std::vector<double>(dim, -1.0), std::vector<double>(dim, 1.0)};
        FitnessFunction stub = [](std::span<const double> x) {
            Evaluation e;
            for (double v : x)
                e.fitness += v * v;
            return e;
        };
        SwarmConfig cfg{.particles = 50, .iterations = 50, .pruning_ratio = 0.02};
        cfg.seed = seed;
        const auto pruned = run_swarm(space, stub, cfg);
        cfg.pruning_ratio = 1.0;
        const auto standard = run_swarm(space, stub, cfg);
        const double ratio = static_cast<double>(pruned.evaluations) / static_cast<double>(standard.evaluations);
        const double want = (1.0 + 0.02) / 2.0;
        report.checks.push_back({"evaluation ratio of pruned vs standard swarm",
                                 std::abs(ratio / want - 1.0) <= 0.02,
                                 std::to_string(pruned.evaluations) + "/" + std::to_string(standard.evaluations) +
                                     " = " + fmt(ratio) + " vs (1+beta)/2 = " + fmt(want)});
    }
    return report;
}

} // namespace nfma::oracle
