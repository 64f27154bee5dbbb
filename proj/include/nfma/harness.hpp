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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nfma/channel.hpp"
#include "nfma/position_problem.hpp"
#include "nfma/swarm.hpp"

namespace nfma
{

enum class RotationMode
{
    Identity,
    Random,
};

/// Simulation scenario. Region sizes and the minimum spacing are given in
/// wavelengths; the swarm settings ride along so one file fully describes a
/// run.
struct Scenario
{
    double carrier_frequency_hz = 28e9;
    int num_tx = 4;
    int num_users = 3;
    int num_scatterers = 5;
    double tx_region_wavelengths = 100.0;
    double rx_region_wavelengths = 1.0;
    double distance_min_m = 50.0;
    double distance_max_m = 200.0;
    double rician_factor_db = 3.0;
    double noise_power_dbm = -80.0;
    double rate_target_bps_hz = 3.0;
    double min_spacing_wavelengths = 0.5;
    RotationMode rotations = RotationMode::Identity;
    std::uint64_t seed = 1;
    SwarmConfig swarm{.particles = 20, .iterations = 30};

    double wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }
    void validate() const;
};

// Users and scatterers are dropped on the horizontal plane within this
// azimuth half-width of the array broadside (+y).
inline constexpr double kAzimuthHalfWidthDeg = 60.0;

struct ScenarioDrop
{
    std::uint64_t seed = 0;
    ChannelDrop channel;
    double rayleigh_distance_m = 0.0;
    bool all_users_in_near_field = true;
};

/// Draws user origins, device rotations, scatterers and reflection
/// coefficients. Distances are uniform in area over the annulus
/// [distance_min, distance_max]; each user has an independent random stream so
/// user k's drop does not depend on how many users the scenario has.
ScenarioDrop drop_scenario(const Scenario &scenario, std::uint64_t seed);

enum class SchemeKind
{
    Proposed, // pruned swarm over transmit and receive positions
    MaPso,    // standard swarm (pruning ratio 1)
    MaBs,     // movable transmit antennas only
    Fpa,      // half-wavelength horizontal ULA, receivers at region centres
};

std::string_view to_string(SchemeKind kind);
SchemeKind parse_scheme(std::string_view name);
std::vector<SchemeKind> all_schemes();

PositionProblem make_problem(const Scenario &scenario, const ScenarioDrop &drop, SchemeKind kind);

// Centred half-wavelength ULA along the global x axis.
std::vector<Vec3> uniform_linear_array(std::size_t n, double spacing);

struct ExperimentResult
{
    SchemeKind scheme = SchemeKind::Proposed;
    std::uint64_t seed = 0;
    bool feasible = false;
    double power_w = 0.0;
    double power_dbm = 0.0;
    long long evaluations = 0;
    long long initial_evaluations = 0;
    std::vector<TraceRecord> trace;
    SystemLayout layout;
    BeamformingSolution solution;
    std::string diagnostic;
};

// Swarm seed used for a given drop seed.
std::uint64_t swarm_seed(std::uint64_t seed);

ExperimentResult run_scheme(SchemeKind kind, const Scenario &scenario, const SwarmConfig &config,
                            std::uint64_t seed);
ExperimentResult run_scheme(SchemeKind kind, const Scenario &scenario, const SwarmConfig &config,
                            const ScenarioDrop &drop);

enum class SweepAxis
{
    RegionSize, // receive region side, wavelengths
    UserCount,
    RateTarget,
    Distance, // BS-user (and scatterer) distance, metres
};

std::string_view to_string(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);

Scenario apply_axis(Scenario scenario, SweepAxis axis, double value);

struct SweepCell
{
    SchemeKind scheme;
    double value;
    std::uint64_t seed;
};

struct SweepRow
{
    SchemeKind scheme = SchemeKind::Proposed;
    std::string axis = "none";
    double value = 0.0;
    std::uint64_t seed = 0;
    double power_dbm = 0.0;
    long long evals = 0;
    bool feasible = false;
    std::string trace_file;
};

std::string trace_file_name(SchemeKind scheme, std::string_view axis, double value, std::uint64_t seed);
SweepRow make_row(const ExperimentResult &r, std::string_view axis, double value);

struct SweepOptions
{
    unsigned threads = 1;
    // Returns a finished row for cells completed earlier (resume support).
    std::function<std::optional<SweepRow>(const SweepCell &)> lookup;
    // Called once per freshly computed cell, possibly from a worker thread.
    std::function<void(const SweepRow &, const ExperimentResult &)> on_complete;
};

/// Full factorial scheme x value x seed. Seeds are scenario.seed + i for
/// i < seeds; all schemes at one (value, seed) share the same drop. Rows come
/// back ordered by value, seed, then scheme order.
std::vector<SweepRow> sweep(const Scenario &scenario, SweepAxis axis, std::span<const double> values,
                            std::span<const SchemeKind> schemes, int seeds, const SweepOptions &options = {});

struct PairedMean
{
    double mean_dbm = 0.0;
    double ci95_dbm = 0.0; // half-width, normal approximation
    int samples = 0;
};

/// Mean power in dBm per (scheme, value), taken only over seeds for which
/// every scheme at that value is feasible, so the means stay paired.
std::map<std::pair<SchemeKind, double>, PairedMean> paired_means(std::span<const SweepRow> rows);

} // namespace nfma
