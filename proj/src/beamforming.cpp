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

#include "nfma/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nfma/units.hpp"

namespace nfma
{

LinkBudget LinkBudget::uniform(std::size_t users, double noise_dbm, double rate_target)
{
    if (!(rate_target > 0.0))
        throw std::invalid_argument("LinkBudget: rate target must be positive");
    LinkBudget b;
    b.noise_w.assign(users, dbm_to_watts(noise_dbm));
    b.rate_targets.assign(users, rate_target);
    return b;
}

std::vector<double> LinkBudget::sinr_targets() const
{
    std::vector<double> g;
    g.reserve(rate_targets.size());
    for (double r : rate_targets)
        g.push_back(rate_to_sinr(r));
    return g;
}

std::string_view to_string(SolverStatus status)
{
    switch (status)
    {
    case SolverStatus::Optimal:
        return "optimal";
    case SolverStatus::Infeasible:
        return "infeasible";
    case SolverStatus::MaxIterations:
        return "max_iterations";
    }
    return "unknown";
}

double sinr(std::span<const CVec> h, std::span<const CVec> w, std::span<const double> noise_w, std::size_t k)
{
    if (h.size() != w.size() || h.size() != noise_w.size() || k >= h.size())
        throw std::invalid_argument("sinr: inconsistent dimensions");
    const double signal = std::norm(h[k].dot(w[k]));
    double interference = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (i != k)
            interference += std::norm(h[k].dot(w[i]));
    return signal / (interference + noise_w[k]);
}

std::vector<double> sinr_all(std::span<const CVec> h, std::span<const CVec> w, std::span<const double> noise_w)
{
    std::vector<double> out(h.size());
    for (std::size_t k = 0; k < h.size(); ++k)
        out[k] = sinr(h, w, noise_w, k);
    return out;
}

double achievable_rate(double s)
{
    return std::log2(1.0 + s);
}

std::vector<double> powers_for_directions(std::span<const CVec> h, std::span<const CVec> directions,
                                          std::span<const double> sinr_targets, std::span<const double> noise_w)
{
    const auto K = static_cast<Eigen::Index>(h.size());
    Eigen::MatrixXd m(K, K);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index i = 0; i < K; ++i)
        {
            const double c = std::norm(h[k].dot(directions[i]));
            m(k, i) = (i == k) ? c / sinr_targets[k] : -c;
        }
    Eigen::VectorXd rhs(K);
    for (Eigen::Index k = 0; k < K; ++k)
        rhs[k] = noise_w[k];

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const Eigen::VectorXd p = lu.solve(rhs);
    if (!p.allFinite() || (p.array() <= 0.0).any())
        return {};
    // Reject near-singular systems where the residual is not small.
    if ((m * p - rhs).cwiseAbs().maxCoeff() > 1e-8 * rhs.cwiseAbs().maxCoeff())
        return {};
    return {p.data(), p.data() + p.size()};
}

BeamformingSolution minimize_power(std::span<const CVec> h, std::span<const double> sinr_targets,
                                   std::span<const double> noise_w, const DualitySolverOptions &options)
{
    const std::size_t K = h.size();
    if (K == 0 || sinr_targets.size() != K || noise_w.size() != K)
        throw std::invalid_argument("minimize_power: inconsistent dimensions");
    const auto N = h[0].size();
    if (N == 0)
        throw std::invalid_argument("minimize_power: empty channel");
    for (std::size_t k = 0; k < K; ++k)
    {
        if (h[k].size() != N)
            throw std::invalid_argument("minimize_power: channel length mismatch");
        if (!(sinr_targets[k] > 0.0) || !(noise_w[k] > 0.0))
            throw std::invalid_argument("minimize_power: targets and noise must be positive");
        if (!h[k].allFinite() || h[k].squaredNorm() == 0.0)
            throw std::invalid_argument("minimize_power: zero or non-finite channel");
    }

    // Unit-noise channels.
    Eigen::MatrixXcd g(N, static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k)
        g.col(static_cast<Eigen::Index>(k)) = h[k] / std::sqrt(noise_w[k]);

    double lower_bound = 0.0;
    for (std::size_t k = 0; k < K; ++k)
        lower_bound += sinr_targets[k] / g.col(static_cast<Eigen::Index>(k)).squaredNorm();

    BeamformingSolution sol;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    Eigen::MatrixXcd s(N, N);
    Eigen::LLT<Eigen::MatrixXcd> llt;
    bool converged = false;

    for (int it = 1; it <= options.max_iterations; ++it)
    {
        s = g * q.asDiagonal() * g.adjoint();
        s.diagonal().array() += 1.0;
        llt.compute(s);
        const Eigen::MatrixXcd sg = llt.solve(g);

        double change = 0.0;
        Eigen::VectorXd next(static_cast<Eigen::Index>(K));
        for (std::size_t k = 0; k < K; ++k)
        {
            const auto kk = static_cast<Eigen::Index>(k);
            // g^H S^-1 g, then the matrix inversion lemma strips user k's own term.
            const double quad = g.col(kk).dot(sg.col(kk)).real();
            const double interference_quad = quad / (1.0 - q[kk] * quad);
            next[kk] = sinr_targets[k] / interference_quad;
            change = std::max(change, std::abs(next[kk] - q[kk]) / next[kk]);
        }
        q = next;
        sol.iterations = it;

        if (!q.allFinite() || q.sum() > options.divergence_ratio * lower_bound)
        {
            sol.status = SolverStatus::Infeasible;
            return sol;
        }
        if (change < options.tolerance)
        {
            converged = true;
            break;
        }
    }
    if (!converged)
    {
        sol.status = SolverStatus::MaxIterations;
        return sol;
    }

    s = g * q.asDiagonal() * g.adjoint();
    s.diagonal().array() += 1.0;
    llt.compute(s);
    const Eigen::MatrixXcd receivers = llt.solve(g);

    std::vector<CVec> directions(K);
    for (std::size_t k = 0; k < K; ++k)
        directions[k] = receivers.col(static_cast<Eigen::Index>(k)).normalized();

    const auto p = powers_for_directions(h, directions, sinr_targets, noise_w);
    if (p.empty())
    {
        sol.status = SolverStatus::Infeasible;
        return sol;
    }

    sol.beamformers.resize(K);
    sol.total_power_w = 0.0;
    for (std::size_t k = 0; k < K; ++k)
    {
        CVec w = std::sqrt(p[k]) * directions[k];
        const cdouble proj = h[k].dot(w);
        if (std::abs(proj) > 0.0)
            w *= std::conj(proj) / std::abs(proj);
        sol.beamformers[k] = std::move(w);
        sol.total_power_w += sol.beamformers[k].squaredNorm();
    }
    sol.achieved_sinr = sinr_all(h, sol.beamformers, noise_w);
    sol.status = SolverStatus::Optimal;
    return sol;
}

std::vector<bool> check_rate_constraints(std::span<const CVec> h, std::span<const CVec> w,
                                         std::span<const double> noise_w, std::span<const double> rate_targets)
{
    if (rate_targets.size() != h.size())
        throw std::invalid_argument("check_rate_constraints: inconsistent dimensions");
    std::vector<bool> ok(h.size());
    for (std::size_t k = 0; k < h.size(); ++k)
        ok[k] = achievable_rate(sinr(h, w, noise_w, k)) >= rate_targets[k] - 1e-9;
    return ok;
}

} // namespace nfma
