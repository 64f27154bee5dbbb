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
#include <random>
#include <span>
#include <vector>

#include "nfma/channel.hpp"
#include "nfma/geometry.hpp"

namespace nfma::oracle
{

/// Two users, two antennas: exhaustive search over beam directions
/// u = (cos a, e^{jb} sin a) per user, with the powers for each direction
/// pair obtained by making both SINR constraints tight. A coarse grid is
/// followed by a shrinking pattern search around the best cell. Returns +inf
/// when no grid point is feasible.
double grid_search_two_user_power(std::span<const CVec> h, std::span<const double> sinr_targets,
                                  std::span<const double> noise_w, int grid = 40);

/// Random beamforming instance with K <= N, CN(0, 1) channels scaled by a
/// random path gain, noise in [0.5, 2] and rates in [0.5, 4] bps/Hz.
struct RandomInstance
{
    std::vector<CVec> h;
    std::vector<double> sinr_targets;
    std::vector<double> noise_w;
};
RandomInstance random_instance(std::mt19937_64 &rng, int max_users, int max_antennas);

/// Exhaustive optimum for one user and two transmit antennas on a square
/// grid in the x-z plane (y = 0) with LoS-only propagation and the receiver
/// fixed at `rx`. Power is the maximum-ratio value gamma sigma^2 / ||h||^2;
/// since ||h||^2 separates over antennas, the best feasible pair (distance >=
/// min_spacing) is found exactly by scanning the per-point gains in sorted
/// order.
struct TinyGridOptimum
{
    double power_w = 0.0;
    Vec3 t1 = Vec3::Zero();
    Vec3 t2 = Vec3::Zero();
    std::size_t grid_points = 0;
};
TinyGridOptimum tiny_grid_optimum(double region_side, double resolution, const Vec3 &rx, double los_gain,
                                  double rician_factor, double wavelength, double sinr_target, double noise_w,
                                  double min_spacing);

} // namespace nfma::oracle
