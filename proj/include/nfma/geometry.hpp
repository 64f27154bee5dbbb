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
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nfma
{

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Orthogonal coordinate-transform matrix mapping a user's local frame into
/// the global frame. Construction rejects anything that is not a proper
/// rotation (R R^T = I, det R = +1, both to 1e-12).
class Rotation
{
  public:
    static constexpr double kTolerance = 1e-12;

    Rotation() : m_(Mat3::Identity()) {}
    explicit Rotation(const Mat3 &m);

    static Rotation identity() { return Rotation(); }
    static Rotation about_z(double angle_rad);

    // Haar-distributed proper rotation (QR of a Gaussian matrix).
    static Rotation random(std::mt19937_64 &rng);

    const Mat3 &matrix() const { return m_; }
    Vec3 apply(const Vec3 &v) const { return m_ * v; }

    // max |(R R^T - I)_ij|
    double orthogonality_residual() const;

  private:
    Mat3 m_;
};

/// Square moving region in the x-z plane of its frame; the y coordinate is
/// pinned to center.y().
struct RegionBox
{
    Vec3 center = Vec3::Zero();
    double half_extent = 0.0;

    static RegionBox square(const Vec3 &center, double side);

    Vec3 lower() const { return {center.x() - half_extent, center.y(), center.z() - half_extent}; }
    Vec3 upper() const { return {center.x() + half_extent, center.y(), center.z() + half_extent}; }
    bool contains(const Vec3 &p, double slack = 0.0) const;
};

/// Antenna placement for one candidate solution. tx is global, rx_local is
/// expressed in each user's local frame.
struct SystemLayout
{
    std::vector<Vec3> tx;
    std::vector<Vec3> rx_local;
    std::vector<Vec3> user_origins;
    std::vector<Rotation> rotations;
    double min_spacing = 0.0;

    std::vector<Vec3> rx_global() const;
};

Vec3 local_to_global(const Vec3 &origin, const Rotation &rotation, const Vec3 &local);

// +infinity when fewer than two antennas are given.
double min_pairwise_distance(std::span<const Vec3> positions);

// Antennas with at least one neighbour strictly closer than min_spacing.
// Each antenna is counted once regardless of how many pairs it is part of.
std::size_t count_violating_antennas(std::span<const Vec3> positions, double min_spacing);

std::vector<double> project_into_region(std::span<const double> u, std::span<const double> lower,
                                        std::span<const double> upper);
void project_into_region_inplace(std::span<double> u, std::span<const double> lower,
                                 std::span<const double> upper);

} // namespace nfma
