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

#include "nfma/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nfma
{

Rotation::Rotation(const Mat3 &m) : m_(m)
{
    if (!m.allFinite())
        throw std::invalid_argument("Rotation: non-finite entries");
    if (orthogonality_residual() > kTolerance)
        throw std::invalid_argument("Rotation: matrix is not orthogonal");
    if (std::abs(m.determinant() - 1.0) > kTolerance)
        throw std::invalid_argument("Rotation: determinant is not +1");
}

Rotation Rotation::about_z(double angle_rad)
{
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    Mat3 m;
    m << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
    return Rotation(m);
}

Rotation Rotation::random(std::mt19937_64 &rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat3 g;
    for (int i = 0; i < 9; ++i)
        g(i) = gauss(rng);

    Eigen::HouseholderQR<Mat3> qr(g);
    Mat3 q = qr.householderQ();
    const Mat3 r = qr.matrixQR();
    for (int j = 0; j < 3; ++j)
        if (r(j, j) < 0.0)
            q.col(j) = -q.col(j);
    if (q.determinant() < 0.0)
        q.col(0) = -q.col(0);

    // One Newton-Schulz style polish step pulls the residual to machine precision.
    q = 0.5 * q * (3.0 * Mat3::Identity() - q.transpose() * q);
    return Rotation(q);
}

double Rotation::orthogonality_residual() const
{
    return (m_ * m_.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
}

RegionBox RegionBox::square(const Vec3 &center, double side)
{
    if (!(side >= 0.0))
        throw std::invalid_argument("RegionBox: negative side length");
    return RegionBox{center, 0.5 * side};
}

bool RegionBox::contains(const Vec3 &p, double slack) const
{
    const Vec3 lo = lower(), hi = upper();
    for (int i = 0; i < 3; ++i)
        if (p[i] < lo[i] - slack || p[i] > hi[i] + slack)
            return false;
    return true;
}

std::vector<Vec3> SystemLayout::rx_global() const
{
    std::vector<Vec3> out;
    out.reserve(rx_local.size());
    for (std::size_t k = 0; k < rx_local.size(); ++k)
        out.push_back(local_to_global(user_origins.at(k), rotations.at(k), rx_local[k]));
    return out;
}

Vec3 local_to_global(const Vec3 &origin, const Rotation &rotation, const Vec3 &local)
{
    return origin + rotation.apply(local);
}

double min_pairwise_distance(std::span<const Vec3> positions)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            best = std::min(best, (positions[i] - positions[j]).norm());
    return best;
}

std::size_t count_violating_antennas(std::span<const Vec3> positions, double min_spacing)
{
    if (!(min_spacing > 0.0))
        throw std::invalid_argument("count_violating_antennas: min_spacing must be positive");

    std::vector<char> violates(positions.size(), 0);
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if ((positions[i] - positions[j]).norm() < min_spacing)
                violates[i] = violates[j] = 1;
    return static_cast<std::size_t>(std::count(violates.begin(), violates.end(), 1));
}

void project_into_region_inplace(std::span<double> u, std::span<const double> lower,
                                 std::span<const double> upper)
{
    if (u.size() != lower.size() || u.size() != upper.size())
        throw std::invalid_argument("project_into_region: dimension mismatch");
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = std::max(std::min(u[i], upper[i]), lower[i]);
}

std::vector<double> project_into_region(std::span<const double> u, std::span<const double> lower,
                                        std::span<const double> upper)
{
    std::vector<double> out(u.begin(), u.end());
    project_into_region_inplace(out, lower, upper);
    return out;
}

} // namespace nfma
