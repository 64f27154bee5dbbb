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

#include "nfma/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <numbers>
#include <set>
#include <stdexcept>

#include "nfma/parallel.hpp"
#include "nfma/rng.hpp"
#include "nfma/units.hpp"

namespace nfma
{

namespace
{
constexpr std::uint64_t kDropStream = 0x64726f70;  // "drop"
constexpr std::uint64_t kSwarmStream = 0x7377726d; // "swrm"

std::string format_value(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}
} // namespace

void Scenario::validate() const
{
    if (!(carrier_frequency_hz > 0.0))
        throw std::invalid_argument("carrier_frequency_hz must be positive");
    if (num_tx < 1)
        throw std::invalid_argument("num_tx must be >= 1");
    if (num_users < 1)
        throw std::invalid_argument("num_users must be >= 1");
    if (num_scatterers < 0)
        throw std::invalid_argument("num_scatterers must be >= 0");
    if (!(tx_region_wavelengths >= 0.0) || !(rx_region_wavelengths >= 0.0))
        throw std::invalid_argument("tx_region_wavelengths and rx_region_wavelengths must be non-negative");
    if (!(distance_min_m > 0.0) || !(distance_min_m <= distance_max_m))
        throw std::invalid_argument("need 0 < distance_min_m <= distance_max_m");
    if (!(rate_target_bps_hz > 0.0))
        throw std::invalid_argument("rate_target_bps_hz must be positive");
    if (!(min_spacing_wavelengths > 0.0))
        throw std::invalid_argument("min_spacing_wavelengths must be positive");
    if (!std::isfinite(rician_factor_db) || !std::isfinite(noise_power_dbm))
        throw std::invalid_argument("rician_factor_db and noise_power_dbm must be finite");
    swarm.validate();
}

ScenarioDrop drop_scenario(const Scenario &scenario, std::uint64_t seed)
{
    scenario.validate();
    const double lambda = scenario.wavelength();
    const double d2_min = scenario.distance_min_m * scenario.distance_min_m;
    const double d2_max = scenario.distance_max_m * scenario.distance_max_m;
    const double half_width = kAzimuthHalfWidthDeg * std::numbers::pi / 180.0;

    auto draw_point = [&](std::mt19937_64 &rng) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double d = std::sqrt(d2_min + (d2_max - d2_min) * unit(rng));
        const double azimuth = half_width * (2.0 * unit(rng) - 1.0);
        return Vec3(d * std::sin(azimuth), d * std::cos(azimuth), 0.0);
    };

    ScenarioDrop out;
    out.seed = seed;
    out.channel.rician_factor = db_to_linear(scenario.rician_factor_db);

    const double aperture = std::sqrt(2.0) * scenario.tx_region_wavelengths * lambda;
    out.rayleigh_distance_m = 2.0 * aperture * aperture / lambda;

    for (int k = 0; k < scenario.num_users; ++k)
    {
        auto rng = make_stream(seed, {kDropStream, static_cast<std::uint64_t>(k)});
        UserDrop user;
        user.origin = draw_point(rng);
        if (scenario.rotations == RotationMode::Random)
            user.rotation = Rotation::random(rng);
        user.los_gain = free_space_amplitude(user.origin.norm(), lambda);

        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
        for (int l = 0; l < scenario.num_scatterers; ++l)
        {
            ScattererPath s;
            s.position = draw_point(rng);
            const double re = gauss(rng);
            const double im = gauss(rng);
            s.reflection = cdouble(re, im);
            // Free-space loss over the full bounce length; the reflection
            // coefficient carries the random part.
            s.gain_bs = free_space_amplitude(s.position.norm() + (s.position - user.origin).norm(), lambda);
            s.gain_user = 1.0;
            user.scatterers.push_back(s);
        }
        if (user.origin.norm() >= out.rayleigh_distance_m)
            out.all_users_in_near_field = false;
        out.channel.users.push_back(std::move(user));
    }
    return out;
}

std::string_view to_string(SchemeKind kind)
{
    switch (kind)
    {
    case SchemeKind::Proposed:
        return "proposed";
    case SchemeKind::MaPso:
        return "ma-pso";
    case SchemeKind::MaBs:
        return "ma-bs";
    case SchemeKind::Fpa:
        return "fpa";
    }
    return "unknown";
}

SchemeKind parse_scheme(std::string_view name)
{
    for (auto k : all_schemes())
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

std::vector<SchemeKind> all_schemes()
{
    return {SchemeKind::Proposed, SchemeKind::MaPso, SchemeKind::MaBs, SchemeKind::Fpa};
}

PositionProblem make_problem(const Scenario &scenario, const ScenarioDrop &drop, SchemeKind kind)
{
    const double lambda = scenario.wavelength();
    PositionProblem p;
    p.wavelength = lambda;
    p.num_tx = static_cast<std::size_t>(scenario.num_tx);
    p.tx_region = RegionBox::square(Vec3::Zero(), scenario.tx_region_wavelengths * lambda);
    for (int k = 0; k < scenario.num_users; ++k)
        p.rx_regions.push_back(RegionBox::square(Vec3::Zero(), scenario.rx_region_wavelengths * lambda));
    p.drop = drop.channel;
    p.budget = LinkBudget::uniform(static_cast<std::size_t>(scenario.num_users), scenario.noise_power_dbm,
                                   scenario.rate_target_bps_hz);
    p.min_spacing = scenario.min_spacing_wavelengths * lambda;
    p.optimize_receivers = kind == SchemeKind::Proposed || kind == SchemeKind::MaPso;
    return p;
}

std::vector<Vec3> uniform_linear_array(std::size_t n, double spacing)
{
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back((static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * spacing, 0.0, 0.0);
    return out;
}

std::uint64_t swarm_seed(std::uint64_t seed)
{
    return stream_seed(seed, {kSwarmStream});
}

ExperimentResult run_scheme(SchemeKind kind, const Scenario &scenario, const SwarmConfig &config,
                            std::uint64_t seed)
{
    return run_scheme(kind, scenario, config, drop_scenario(scenario, seed));
}

ExperimentResult run_scheme(SchemeKind kind, const Scenario &scenario, const SwarmConfig &config,
                            const ScenarioDrop &drop)
{
    const PositionProblem problem = make_problem(scenario, drop, kind);
    problem.validate();

    ExperimentResult r;
    r.scheme = kind;
    r.seed = drop.seed;

    if (kind == SchemeKind::Fpa)
    {
        SystemLayout layout;
        layout.tx = uniform_linear_array(problem.num_tx, 0.5 * problem.wavelength);
        layout.min_spacing = problem.min_spacing;
        for (std::size_t k = 0; k < problem.num_users(); ++k)
        {
            layout.rx_local.push_back(problem.rx_regions[k].center);
            layout.user_origins.push_back(problem.drop.users[k].origin);
            layout.rotations.push_back(problem.drop.users[k].rotation);
        }
        r.solution = solve_layout(problem, layout);
        r.layout = std::move(layout);
        r.evaluations = 1;
        r.feasible = r.solution.optimal();
        r.power_w = r.feasible ? r.solution.total_power_w : kInfeasiblePowerW;
        r.power_dbm = watts_to_dbm(r.power_w);
        r.trace.push_back({0, 1, r.power_w, 0.0, 1});
        if (!r.feasible)
            r.diagnostic = "beamforming subproblem " + std::string(to_string(r.solution.status));
        return r;
    }

    SwarmConfig cfg = config;
    cfg.seed = swarm_seed(drop.seed);
    if (kind == SchemeKind::MaPso)
        cfg.pruning_ratio = 1.0;

    OptimizationOutcome o = optimize_positions(problem, cfg);
    r.feasible = o.success;
    r.power_w = o.solution.optimal() ? o.solution.total_power_w : kInfeasiblePowerW;
    r.power_dbm = watts_to_dbm(r.power_w);
    r.evaluations = o.evaluations;
    r.initial_evaluations = o.initial_evaluations;
    r.trace = std::move(o.trace);
    r.layout = std::move(o.layout);
    r.solution = std::move(o.solution);
    r.diagnostic = std::move(o.diagnostic);
    return r;
}

std::string_view to_string(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::RegionSize:
        return "region_size";
    case SweepAxis::UserCount:
        return "user_count";
    case SweepAxis::RateTarget:
        return "rate_target";
    case SweepAxis::Distance:
        return "distance";
    }
    return "unknown";
}

SweepAxis parse_axis(std::string_view name)
{
    for (auto a : {SweepAxis::RegionSize, SweepAxis::UserCount, SweepAxis::RateTarget, SweepAxis::Distance})
        if (to_string(a) == name)
            return a;
    throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

Scenario apply_axis(Scenario scenario, SweepAxis axis, double value)
{
    switch (axis)
    {
    case SweepAxis::RegionSize:
        scenario.rx_region_wavelengths = value;
        break;
    case SweepAxis::UserCount:
        if (value < 1.0 || value != std::floor(value))
            throw std::invalid_argument("user_count values must be positive integers");
        scenario.num_users = static_cast<int>(value);
        break;
    case SweepAxis::RateTarget:
        scenario.rate_target_bps_hz = value;
        break;
    case SweepAxis::Distance:
        scenario.distance_min_m = value;
        scenario.distance_max_m = value;
        break;
    }
    scenario.validate();
    return scenario;
}

std::string trace_file_name(SchemeKind scheme, std::string_view axis, double value, std::uint64_t seed)
{
    return "traces/" + std::string(to_string(scheme)) + "_" + std::string(axis) + "_" + format_value(value) +
           "_s" + std::to_string(seed) + ".csv";
}

SweepRow make_row(const ExperimentResult &r, std::string_view axis, double value)
{
    SweepRow row;
    row.scheme = r.scheme;
    row.axis = std::string(axis);
    row.value = value;
    row.seed = r.seed;
    row.power_dbm = r.power_dbm;
    row.evals = r.evaluations;
    row.feasible = r.feasible;
    row.trace_file = trace_file_name(r.scheme, axis, value, r.seed);
    return row;
}

std::vector<SweepRow> sweep(const Scenario &scenario, SweepAxis axis, std::span<const double> values,
                            std::span<const SchemeKind> schemes, int seeds, const SweepOptions &options)
{
    if (seeds < 1)
        throw std::invalid_argument("sweep: need at least one seed");
    const std::string axis_name(to_string(axis));

    std::vector<Scenario> scenarios;
    for (double v : values)
        scenarios.push_back(apply_axis(scenario, axis, v));

    const std::size_t n_values = values.size();
    const std::size_t n_seeds = static_cast<std::size_t>(seeds);
    const std::size_t n_schemes = schemes.size();
    std::vector<SweepRow> rows(n_values * n_seeds * n_schemes);

    // One job per (value, seed); the schemes inside share the drop.
    std::mutex callback_mutex;
    parallel_for(n_values * n_seeds, options.threads, [&](std::size_t job) {
        const std::size_t vi = job / n_seeds;
        const std::uint64_t seed = scenario.seed + job % n_seeds;
        std::optional<ScenarioDrop> drop;
        for (std::size_t si = 0; si < n_schemes; ++si)
        {
            SweepRow &row = rows[job * n_schemes + si];
            const SweepCell cell{schemes[si], values[vi], seed};
            if (options.lookup)
                if (auto done = options.lookup(cell))
                {
                    row = *done;
                    continue;
                }
            if (!drop)
                drop = drop_scenario(scenarios[vi], seed);
            const auto result = run_scheme(schemes[si], scenarios[vi], scenarios[vi].swarm, *drop);
            row = make_row(result, axis_name, values[vi]);
            if (options.on_complete)
            {
                std::lock_guard lock(callback_mutex);
                options.on_complete(row, result);
            }
        }
    });
    return rows;
}

std::map<std::pair<SchemeKind, double>, PairedMean> paired_means(std::span<const SweepRow> rows)
{
    // (value, seed) pairs where some scheme failed are dropped for every scheme.
    std::set<std::pair<double, std::uint64_t>> excluded;
    for (const auto &r : rows)
        if (!r.feasible)
            excluded.insert({r.value, r.seed});

    std::map<std::pair<SchemeKind, double>, std::vector<double>> samples;
    for (const auto &r : rows)
        if (!excluded.contains({r.value, r.seed}))
            samples[{r.scheme, r.value}].push_back(r.power_dbm);

    std::map<std::pair<SchemeKind, double>, PairedMean> out;
    for (const auto &[key, xs] : samples)
    {
        PairedMean m;
        m.samples = static_cast<int>(xs.size());
        double sum = 0.0;
        for (double x : xs)
            sum += x;
        m.mean_dbm = sum / static_cast<double>(xs.size());
        if (xs.size() > 1)
        {
            double ss = 0.0;
            for (double x : xs)
                ss += (x - m.mean_dbm) * (x - m.mean_dbm);
            const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
            m.ci95_dbm = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
        }
        out[key] = m;
    }
    return out;
}

} // namespace nfma
