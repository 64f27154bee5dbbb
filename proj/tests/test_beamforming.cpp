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

#include "nfma/beamforming.hpp"
#include "nfma/oracle/reference.hpp"
#include "nfma/oracle/socp_barrier.hpp"
#include "nfma/oracle/validation.hpp"
#include "nfma/units.hpp"

using namespace nfma;

namespace
{
CVec random_cvec(std::mt19937_64 &rng, Eigen::Index n, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = scale * cdouble(g(rng), g(rng));
    return v;
}

double hdot_norm(const CVec &h, const CVec &w)
{
    cdouble acc = 0;
    for (Eigen::Index i = 0; i < h.size(); ++i)
        acc += std::conj(h[i]) * w[i];
    return std::norm(acc);
}
} // namespace

TEST_CASE("SINR definition")
{
    std::mt19937_64 rng(1);
    const std::vector<CVec> h1{random_cvec(rng, 3)};
    const std::vector<CVec> w1{random_cvec(rng, 3)};
    const std::vector<double> s1{0.2};
    CHECK(sinr(h1, w1, s1, 0) == doctest::Approx(hdot_norm(h1[0], w1[0]) / 0.2).epsilon(1e-13));

    const std::vector<CVec> w0{CVec::Zero(3)};
    CHECK(sinr(h1, w0, s1, 0) == 0.0);

    CVec a(2), b(2);
    a << cdouble(1, 0), cdouble(0, 1);
    b << cdouble(0, 1), cdouble(1, 0); // a^H b = 0
    const std::vector<CVec> h2{a, random_cvec(rng, 2)};
    const std::vector<CVec> w2{random_cvec(rng, 2), b};
    const std::vector<double> s2{0.5, 0.7};
    CHECK(sinr(h2, w2, s2, 0) == doctest::Approx(hdot_norm(a, w2[0]) / 0.5).epsilon(1e-13));
    CHECK_THROWS_AS(sinr(h2, w1, s2, 0), std::invalid_argument);
}

TEST_CASE("achievable rate")
{
    CHECK(achievable_rate(0.0) == 0.0);
    CHECK(achievable_rate(31.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(achievable_rate(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rate_to_sinr(5.0) == doctest::Approx(31.0));
}

TEST_CASE("link budget units")
{
    const auto b = LinkBudget::uniform(3, -80.0, 5.0);
    REQUIRE(b.users() == 3);
    CHECK(b.noise_w[0] == doctest::Approx(1e-11).epsilon(1e-12));
    CHECK(b.sinr_targets()[2] == doctest::Approx(31.0));
    CHECK(watts_to_dbm(dbm_to_watts(9.95)) == doctest::Approx(9.95));
    CHECK_THROWS_AS(LinkBudget::uniform(2, -80.0, 0.0), std::invalid_argument);
}

TEST_CASE("single user reduces to maximum-ratio transmission")
{
    CVec h(2);
    h << cdouble(1, 1), cdouble(1, -1); // ||h||^2 = 4
    const std::vector<CVec> hs{h};
    const std::vector<double> g{31.0}, s{1e-11};
    const auto sol = minimize_power(hs, g, s);
    REQUIRE(sol.optimal());
    CHECK(sol.total_power_w == doctest::Approx(7.75e-11).epsilon(1e-9));
    // direction parallel to h, and h^H w real non-negative
    const cdouble proj = h.dot(sol.beamformers[0]);
    CHECK(std::abs(proj.imag()) <= 1e-12 * std::abs(proj));
    CHECK(proj.real() > 0.0);
    CHECK(std::abs(proj) == doctest::Approx(h.norm() * sol.beamformers[0].norm()).epsilon(1e-12));
}

TEST_CASE("orthogonal channels decouple")
{
    CVec a(3), b(3);
    a << 1.0, 0.0, 0.0;
    b << 0.0, cdouble(0, 2), 0.0;
    const std::vector<CVec> h{a, b};
    const std::vector<double> g{3.0, 7.0}, s{0.5, 2.0};
    const auto sol = minimize_power(h, g, s);
    REQUIRE(sol.optimal());
    CHECK(sol.total_power_w == doctest::Approx(3.0 * 0.5 / 1.0 + 7.0 * 2.0 / 4.0).epsilon(1e-9));
}

TEST_CASE("two users, two antennas: two independent oracles agree")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 4; ++trial)
    {
        const std::vector<CVec> h{random_cvec(rng, 2), random_cvec(rng, 2, 0.5)};
        const std::vector<double> g{rate_to_sinr(1.5), rate_to_sinr(2.5)}, s{1.0, 0.8};
        const auto sol = minimize_power(h, g, s);
        REQUIRE(sol.optimal());
        const double grid = oracle::grid_search_two_user_power(h, g, s, 24);
        const auto conic = oracle::socp_min_power(h, g, s);
        REQUIRE(conic.converged);
        CHECK(sol.total_power_w == doctest::Approx(grid).epsilon(1e-4));
        CHECK(sol.total_power_w == doctest::Approx(conic.total_power_w).epsilon(1e-4));
    }
}

TEST_CASE("optimal solutions meet every target with all constraints active")
{
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 60; ++trial)
    {
        const auto inst = oracle::random_instance(rng, 4, 8);
        const auto sol = minimize_power(inst.h, inst.sinr_targets, inst.noise_w);
        REQUIRE(sol.optimal());
        std::vector<double> rates;
        for (double g : inst.sinr_targets)
            rates.push_back(achievable_rate(g));
        const auto ok = check_rate_constraints(inst.h, sol.beamformers, inst.noise_w, rates);
        for (std::size_t k = 0; k < inst.h.size(); ++k)
        {
            CHECK(ok[k]);
            CHECK(sol.achieved_sinr[k] >= inst.sinr_targets[k] * (1 - 1e-6));
            CHECK(sol.achieved_sinr[k] == doctest::Approx(inst.sinr_targets[k]).epsilon(1e-5));
            const cdouble p = inst.h[k].dot(sol.beamformers[k]);
            CHECK(p.real() >= 0.0);
            CHECK(std::abs(p.imag()) <= 1e-9 * std::abs(p));
        }
        double total = 0;
        for (const auto &w : sol.beamformers)
            total += w.squaredNorm();
        CHECK(total == doctest::Approx(sol.total_power_w).epsilon(1e-12));
    }
}

TEST_CASE("scale covariance and monotonicity in the targets")
{
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 30; ++trial)
    {
        auto inst = oracle::random_instance(rng, 4, 6);
        const auto base = minimize_power(inst.h, inst.sinr_targets, inst.noise_w);
        REQUIRE(base.optimal());

        const double alpha = 3.7;
        auto scaled = inst.h;
        for (auto &h : scaled)
            h *= alpha;
        const auto s2 = minimize_power(scaled, inst.sinr_targets, inst.noise_w);
        REQUIRE(s2.optimal());
        CHECK(s2.total_power_w == doctest::Approx(base.total_power_w / (alpha * alpha)).epsilon(1e-6));

        auto targets = inst.sinr_targets;
        targets[static_cast<std::size_t>(trial) % targets.size()] *= 1.5;
        const auto s3 = minimize_power(inst.h, targets, inst.noise_w);
        REQUIRE(s3.optimal());
        CHECK(s3.total_power_w >= base.total_power_w * (1 - 1e-9));
    }
}

TEST_CASE("infeasible instances are reported, not solved")
{
    CVec a(1), b(1);
    a << 1.0;
    b << cdouble(0, 1);
    const std::vector<CVec> h{a, b};
    const std::vector<double> g{3.0, 3.0}, s{1.0, 1.0};
    CHECK(minimize_power(h, g, s).status == SolverStatus::Infeasible);

    CVec c(2);
    c << 1.0, 2.0;
    const std::vector<CVec> same{c, c};
    CHECK_FALSE(minimize_power(same, g, s).optimal());
}

TEST_CASE("rate constraint checks")
{
    CVec h(3);
    h << cdouble(0.3, 0.1), cdouble(-0.2, 0.4), cdouble(0.5, 0.0);
    const std::vector<CVec> hs{h};
    const std::vector<double> s{2e-3};
    const double rate = 2.0;
    const double p = rate_to_sinr(rate) * s[0] / h.squaredNorm();
    const std::vector<CVec> w{std::sqrt(p) * h / h.norm()};
    const std::vector<double> r{rate};
    CHECK(check_rate_constraints(hs, w, s, r)[0]);
    CHECK(achievable_rate(sinr(hs, w, s, 0)) == doctest::Approx(rate).epsilon(1e-9));

    const std::vector<CVec> zero{CVec::Zero(3)};
    CHECK_FALSE(check_rate_constraints(hs, zero, s, r)[0]);
}

TEST_CASE("beamforming oracle suite")
{
    const auto report = oracle::validate_beamforming(3, 100);
    for (const auto &c : report.checks)
    {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
    }
}
