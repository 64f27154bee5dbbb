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

#include "nfma/oracle/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nfma::oracle
{

namespace
{

using Params = std::array<double, 4>; // a1, b1, a2, b2

CVec direction(double a, double b)
{
    CVec u(2);
    u << std::cos(a), std::polar(std::sin(a), b);
    return u;
}

// Total power with both SINR constraints tight, +inf when infeasible.
double tight_power(const CVec &h1, const CVec &h2, const CVec &u1, const CVec &u2, double g1, double g2, double s1,
                   double s2)
{
    const auto proj = [](const CVec &h, const CVec &u) {
        cdouble acc = 0.0;
        for (Eigen::Index i = 0; i < h.size(); ++i)
            acc += std::conj(h[i]) * u[i];
        return std::norm(acc);
    };
    const double c11 = proj(h1, u1), c12 = proj(h1, u2);
    const double c21 = proj(h2, u1), c22 = proj(h2, u2);
    const double det = c11 * c22 / (g1 * g2) - c12 * c21;
    if (!(det > 0.0))
        return std::numeric_limits<double>::infinity();
    const double p1 = (s1 * c22 / g2 + c12 * s2) / det;
    const double p2 = (s2 * c11 / g1 + c21 * s1) / det;
    return p1 + p2;
}

} // namespace

double grid_search_two_user_power(std::span<const CVec> h, std::span<const double> sinr_targets,
                                  std::span<const double> noise_w, int grid)
{
    if (h.size() != 2 || h[0].size() != 2 || h[1].size() != 2)
        throw std::invalid_argument("grid_search_two_user_power: needs K = N = 2");

    auto power = [&](const Params &p) {
        return tight_power(h[0], h[1], direction(p[0], p[1]), direction(p[2], p[3]), sinr_targets[0],
                           sinr_targets[1], noise_w[0], noise_w[1]);
    };

    const double da = 0.5 * std::numbers::pi / grid;
    const double db = std::numbers::pi / grid;
    std::vector<CVec> dirs;
    std::vector<std::array<double, 2>> coords;
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j < 2 * grid; ++j)
        {
            dirs.push_back(direction(i * da, j * db));
            coords.push_back({i * da, j * db});
        }

    Params best{};
    double best_power = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = 0; j < dirs.size(); ++j)
        {
            const double p = tight_power(h[0], h[1], dirs[i], dirs[j], sinr_targets[0], sinr_targets[1], noise_w[0],
                                         noise_w[1]);
            if (p < best_power)
            {
                best_power = p;
                best = {coords[i][0], coords[i][1], coords[j][0], coords[j][1]};
            }
        }
    if (!std::isfinite(best_power))
        return best_power;

    // Pattern search refinement around the best grid cell.
    double step = std::max(da, db);
    while (step > 1e-11)
    {
        bool improved = false;
        for (int c = 0; c < 4; ++c)
            for (double sign : {1.0, -1.0})
            {
                Params trial = best;
                trial[c] += sign * step;
                const double p = power(trial);
                if (p < best_power)
                {
                    best_power = p;
                    best = trial;
                    improved = true;
                }
            }
        if (!improved)
            step *= 0.5;
    }
    return best_power;
}

RandomInstance random_instance(std::mt19937_64 &rng, int max_users, int max_antennas)
{
    std::uniform_int_distribution<int> users(1, max_users);
    const int K = users(rng);
    std::uniform_int_distribution<int> antennas(K, std::max(K, max_antennas));
    const int N = antennas(rng);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    RandomInstance inst;
    for (int k = 0; k < K; ++k)
    {
        const double gain = std::pow(10.0, 2.0 * unit(rng) - 1.0);
        CVec h(N);
        for (int n = 0; n < N; ++n)
            h[n] = gain * cdouble(gauss(rng), gauss(rng));
        inst.h.push_back(h);
        inst.noise_w.push_back(0.5 + 1.5 * unit(rng));
        inst.sinr_targets.push_back(std::exp2(0.5 + 3.5 * unit(rng)) - 1.0);
    }
    return inst;
}

TinyGridOptimum tiny_grid_optimum(double region_side, double resolution, const Vec3 &rx, double los_gain,
                                  double rician_factor, double wavelength, double sinr_target, double noise_w,
                                  double min_spacing)
{
    const int steps = static_cast<int>(std::llround(region_side / resolution));
    const double half = 0.5 * region_side;
    const double amplitude = std::sqrt(rician_factor / (rician_factor + 1.0)) * los_gain;
    const double k0 = 2.0 * std::numbers::pi / wavelength;

    struct Point
    {
        double gain;
        Vec3 pos;
    };
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(steps + 1) * static_cast<std::size_t>(steps + 1));
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j)
        {
            const Vec3 t(-half + i * resolution, 0.0, -half + j * resolution);
            const double dist = std::sqrt((t - rx).dot(t - rx));
            const cdouble entry = amplitude * std::exp(cdouble(0.0, -k0 * dist));
            pts.push_back({std::norm(entry), t});
        }
    std::stable_sort(pts.begin(), pts.end(), [](const Point &a, const Point &b) { return a.gain > b.gain; });

    TinyGridOptimum best;
    best.grid_points = pts.size();
    double best_sum = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        if (pts[i].gain + pts.front().gain <= best_sum)
            break;
        for (std::size_t j = 0; j < pts.size(); ++j)
        {
            if (j == i || pts[i].gain + pts[j].gain <= best_sum)
                continue;
            if ((pts[i].pos - pts[j].pos).norm() >= min_spacing)
            {
                best_sum = pts[i].gain + pts[j].gain;
                best.t1 = pts[i].pos;
                best.t2 = pts[j].pos;
                break; // later j only have smaller gains
            }
        }
    }
    best.power_w = sinr_target * noise_w / best_sum;
    return best;
}

} // namespace nfma::oracle
