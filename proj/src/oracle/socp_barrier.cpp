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

#include "nfma/oracle/socp_barrier.hpp"

#include <cmath>
#include <stdexcept>

namespace nfma::oracle
{

namespace
{

using Eigen::MatrixXd;
using Eigen::VectorXd;

// s = c^T x, z = B x + b, constraint ||z|| <= s.
struct Cone
{
    VectorXd c;
    MatrixXd B;
    VectorXd b;

    double s(const VectorXd &x) const { return c.dot(x); }
    VectorXd z(const VectorXd &x) const { return B * x + b; }
    bool interior(const VectorXd &x) const
    {
        const double sv = s(x);
        return sv > 0.0 && sv * sv - z(x).squaredNorm() > 0.0;
    }
};

struct Barrier
{
    std::vector<Cone> cones;
    Eigen::Index t_index = 0;

    bool interior(const VectorXd &x) const
    {
        for (const auto &k : cones)
            if (!k.interior(x))
                return false;
        return true;
    }

    double value(const VectorXd &x, double mu) const
    {
        double v = mu * x[t_index];
        for (const auto &k : cones)
        {
            const double sv = k.s(x);
            v -= std::log(sv * sv - k.z(x).squaredNorm());
        }
        return v;
    }

    void derivatives(const VectorXd &x, double mu, VectorXd &grad, MatrixXd &hess) const
    {
        const Eigen::Index n = x.size();
        grad = VectorXd::Zero(n);
        hess = MatrixXd::Zero(n, n);
        grad[t_index] = mu;
        for (const auto &k : cones)
        {
            const double sv = k.s(x);
            const VectorXd zv = k.z(x);
            const double f = sv * sv - zv.squaredNorm();
            const VectorXd df = 2.0 * sv * k.c - 2.0 * k.B.transpose() * zv;
            grad -= df / f;
            hess += (df * df.transpose()) / (f * f);
            hess -= (2.0 * k.c * k.c.transpose() - 2.0 * k.B.transpose() * k.B) / f;
        }
    }
};

} // namespace

SocpResult socp_min_power(std::span<const CVec> h, std::span<const double> sinr_targets,
                          std::span<const double> noise_w, double relative_gap)
{
    const std::size_t K = h.size();
    if (K == 0 || sinr_targets.size() != K || noise_w.size() != K)
        throw std::invalid_argument("socp_min_power: inconsistent dimensions");
    const Eigen::Index N = h[0].size();
    if (static_cast<Eigen::Index>(K) > N)
        throw std::invalid_argument("socp_min_power: zero-forcing start needs K <= N");

    // Unit noise, unit average channel energy.
    std::vector<CVec> g(K);
    double energy = 0.0;
    for (std::size_t k = 0; k < K; ++k)
    {
        g[k] = h[k] / std::sqrt(noise_w[k]);
        energy += g[k].squaredNorm();
    }
    const double scale = std::sqrt(static_cast<double>(K) / energy);
    for (auto &gk : g)
        gk *= scale;

    const Eigen::Index nw = 2 * N * static_cast<Eigen::Index>(K);
    const Eigen::Index n = nw + 1;
    auto re_off = [&](std::size_t i) { return 2 * N * static_cast<Eigen::Index>(i); };
    auto im_off = [&](std::size_t i) { return 2 * N * static_cast<Eigen::Index>(i) + N; };

    // Row vectors of Re / Im of g_k^H w_i as linear functions of x.
    auto re_row = [&](std::size_t k, std::size_t i) {
        VectorXd r = VectorXd::Zero(n);
        r.segment(re_off(i), N) = g[k].real();
        r.segment(im_off(i), N) = g[k].imag();
        return r;
    };
    auto im_row = [&](std::size_t k, std::size_t i) {
        VectorXd r = VectorXd::Zero(n);
        r.segment(im_off(i), N) = g[k].real();
        r.segment(re_off(i), N) = -g[k].imag();
        return r;
    };

    Barrier barrier;
    barrier.t_index = nw;
    {
        Cone power;
        power.c = VectorXd::Zero(n);
        power.c[nw] = 1.0;
        power.B = MatrixXd::Zero(nw, n);
        power.B.leftCols(nw).setIdentity();
        power.b = VectorXd::Zero(nw);
        barrier.cones.push_back(std::move(power));
    }
    for (std::size_t k = 0; k < K; ++k)
    {
        Cone c;
        c.c = re_row(k, k) / std::sqrt(sinr_targets[k]);
        const Eigen::Index rows = 2 * static_cast<Eigen::Index>(K - 1) + 1;
        c.B = MatrixXd::Zero(rows, n);
        c.b = VectorXd::Zero(rows);
        Eigen::Index r = 0;
        for (std::size_t i = 0; i < K; ++i)
        {
            if (i == k)
                continue;
            c.B.row(r++) = re_row(k, i).transpose();
            c.B.row(r++) = im_row(k, i).transpose();
        }
        c.b[r] = 1.0;
        barrier.cones.push_back(std::move(c));
    }
    MatrixXd A(static_cast<Eigen::Index>(K), n);
    for (std::size_t k = 0; k < K; ++k)
        A.row(static_cast<Eigen::Index>(k)) = im_row(k, k).transpose();

    // Strictly feasible start: w_k = 2 sqrt(gamma_k) * (zero-forcing column k).
    Eigen::MatrixXcd G(N, static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k)
        G.col(static_cast<Eigen::Index>(k)) = g[k];
    const Eigen::MatrixXcd zf = G * (G.adjoint() * G).inverse();
    VectorXd x = VectorXd::Zero(n);
    for (std::size_t k = 0; k < K; ++k)
    {
        const CVec w = 2.0 * std::sqrt(sinr_targets[k]) * zf.col(static_cast<Eigen::Index>(k));
        x.segment(re_off(k), N) = w.real();
        x.segment(im_off(k), N) = w.imag();
    }
    x[nw] = 2.0 * x.head(nw).norm() + 1.0;

    SocpResult result;
    if (!barrier.interior(x))
        return result;

    const double nu = 2.0 * static_cast<double>(barrier.cones.size()); // barrier parameter
    double mu = nu / x[nw];
    const Eigen::Index m = A.rows();
    MatrixXd kkt(n + m, n + m);
    VectorXd rhs(n + m), grad;
    MatrixXd hess;

    for (int outer = 0; outer < 200; ++outer)
    {
        for (int inner = 0; inner < 200; ++inner)
        {
            barrier.derivatives(x, mu, grad, hess);
            kkt.setZero();
            kkt.topLeftCorner(n, n) = hess;
            kkt.topRightCorner(n, m) = A.transpose();
            kkt.bottomLeftCorner(m, n) = A;
            rhs.head(n) = -grad;
            rhs.tail(m).setZero();
            const VectorXd sol = kkt.partialPivLu().solve(rhs);
            const VectorXd dx = sol.head(n);
            const double decrement = -grad.dot(dx);
            ++result.newton_steps;
            if (!(decrement > 1e-14))
                break;

            double step = 1.0;
            while (step > 1e-20 && !barrier.interior(x + step * dx))
                step *= 0.5;
            const double f0 = barrier.value(x, mu);
            while (step > 1e-20 && barrier.value(x + step * dx, mu) > f0 - 0.25 * step * decrement)
                step *= 0.5;
            if (step <= 1e-20)
                break;
            x += step * dx;
            if (decrement < 1e-12)
                break;
        }
        result.duality_gap = nu / mu;
        if (result.duality_gap < relative_gap * x[nw])
        {
            result.converged = true;
            break;
        }
        mu *= 20.0;
    }

    result.beamformers.resize(K);
    result.total_power_w = 0.0;
    for (std::size_t k = 0; k < K; ++k)
    {
        CVec w(N);
        w.real() = x.segment(re_off(k), N);
        w.imag() = x.segment(im_off(k), N);
        result.beamformers[k] = scale * w;
        result.total_power_w += result.beamformers[k].squaredNorm();
    }
    return result;
}

} // namespace nfma::oracle
