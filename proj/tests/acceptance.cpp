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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "nfma/harness.hpp"
#include "nfma/oracle/validation.hpp"
#include "nfma/swarm.hpp"
#include "nfma/units.hpp"

using namespace nfma;

namespace
{
constexpr int kSeeds = 20;

struct Line
{
    int id;
    bool pass;
    std::string detail;
};

std::vector<Line> lines;

void report(int id, bool pass, const std::string &detail)
{
    lines.push_back({id, pass, detail});
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v, int digits = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

unsigned workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

const oracle::CheckResult *find_check(const oracle::ValidationReport &r, const std::string &name)
{
    for (const auto &c : r.checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

using Means = std::map<std::pair<SchemeKind, double>, PairedMean>;

Means run_sweep(const Scenario &s, SweepAxis axis, const std::vector<double> &values,
                const std::vector<SchemeKind> &schemes, std::vector<ExperimentResult> *results = nullptr)
{
    std::mutex m;
    SweepOptions opt;
    opt.threads = workers();
    if (results)
        opt.on_complete = [&](const SweepRow &, const ExperimentResult &r) {
            std::lock_guard lock(m);
            results->push_back(r);
        };
    const auto rows = sweep(s, axis, values, schemes, kSeeds, opt);
    return paired_means(rows);
}

// Checks a monotone trend of paired means along `values` for each scheme.
bool trend(const Means &m, const std::vector<double> &values, const std::vector<SchemeKind> &schemes,
           bool increasing, std::string &detail)
{
    bool ok = true;
    for (auto k : schemes)
    {
        detail += std::string(to_string(k)) + "[";
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            const double cur = m.at({k, values[i]}).mean_dbm;
            detail += (i ? " " : "") + fmt(cur, 2);
            if (i > 0)
            {
                const double prev = m.at({k, values[i - 1]}).mean_dbm;
                ok = ok && (increasing ? cur > prev : cur <= prev);
            }
        }
        detail += "] ";
    }
    return ok;
}
} // namespace

int main()
{
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario desk; // N=4, K=3, L=5, P=20, Q=30, R=3 bps/Hz
    const std::vector<SchemeKind> all = all_schemes();

    // Desk default, 20 paired drops; feeds criteria 1, 3 and 4.
    std::vector<ExperimentResult> desk_runs;
    const Means desk_means = run_sweep(desk, SweepAxis::RateTarget, {desk.rate_target_bps_hz}, all, &desk_runs);
    const double R = desk.rate_target_bps_hz;

    {
        bool monotone = true;
        int settled = 0, proposed_runs = 0;
        for (const auto &r : desk_runs)
        {
            if (r.scheme == SchemeKind::Fpa)
                continue;
            for (std::size_t q = 1; q < r.trace.size(); ++q)
                monotone = monotone && r.trace[q].best_fitness <= r.trace[q - 1].best_fitness;
            if (r.scheme != SchemeKind::Proposed)
                continue;
            ++proposed_runs;
            const std::size_t Q = r.trace.size() - 1;
            const double gain = watts_to_dbm(r.trace[Q - 5].best_fitness) - watts_to_dbm(r.trace[Q].best_fitness);
            settled += gain < 0.1 ? 1 : 0;
        }
        const bool pass = monotone && proposed_runs == kSeeds && settled * 5 >= proposed_runs * 4;
        report(1, pass,
               std::string("traces non-increasing: ") + (monotone ? "yes" : "no") + "; last-5 gain < 0.1 dB on " +
                   std::to_string(settled) + "/" + std::to_string(proposed_runs) + " seeds (need >= 80%)");
    }

    {
        const int P = 50, Q = 50;
        const double beta = 0.02;
        const SearchSpace space{std::vector<double>(6, 0.0), std::vector<double>(6, 1.0)};
        const FitnessFunction stub = [](std::span<const double>) { return Evaluation{}; };
        SwarmConfig pruned{.particles = P, .iterations = Q, .pruning_ratio = beta};
        SwarmConfig standard = pruned;
        standard.pruning_ratio = 1.0;
        const double a = static_cast<double>(run_swarm(space, stub, pruned).evaluations);
        const double b = static_cast<double>(run_swarm(space, stub, standard).evaluations);
        const double want = (1 + beta) / 2;
        const double ratio = a / b;
        report(2, std::abs(ratio - want) <= 0.02 * want,
               "evaluations " + fmt(a, 0) + "/" + fmt(b, 0) + " = " + fmt(ratio, 4) + ", target " + fmt(want, 4) +
                   " +-2%");
    }

    {
        const double p = desk_means.at({SchemeKind::Proposed, R}).mean_dbm;
        const double s = desk_means.at({SchemeKind::MaPso, R}).mean_dbm;
        report(3, std::abs(p - s) <= 0.5,
               "Proposed " + fmt(p) + " dBm vs MA-PSO " + fmt(s) + " dBm, gap " + fmt(std::abs(p - s)) +
                   " dB (limit 0.5), samples " + std::to_string(desk_means.at({SchemeKind::Proposed, R}).samples));
    }

    {
        const double p = desk_means.at({SchemeKind::Proposed, R}).mean_dbm;
        const double bs = desk_means.at({SchemeKind::MaBs, R}).mean_dbm;
        const double fpa = desk_means.at({SchemeKind::Fpa, R}).mean_dbm;
        const bool order = p <= bs && bs <= fpa && p <= fpa - 0.5;
        std::string detail = "ordering " + fmt(p, 2) + " <= " + fmt(bs, 2) + " <= " + fmt(fpa, 2) +
                             (order ? " ok" : " violated") + "; ";

        Scenario ksc = desk;
        ksc.num_tx = 6;
        ksc.rate_target_bps_hz = 1.0;
        const std::vector<double> kv{2, 4, 6};
        std::string kd;
        const bool k_ok = trend(run_sweep(ksc, SweepAxis::UserCount, kv, all), kv, all, true, kd);

        const std::vector<double> rv{1, 2, 3, 4, 5};
        std::string rd;
        const bool r_ok = trend(run_sweep(desk, SweepAxis::RateTarget, rv, all), rv, all, true, rd);

        const std::vector<double> dv{50, 100, 150, 200};
        std::string dd;
        const bool d_ok = trend(run_sweep(desk, SweepAxis::Distance, dv, all), dv, all, true, dd);

        Scenario asc = desk;
        asc.tx_region_wavelengths = 4.0;
        asc.rate_target_bps_hz = 5.0;
        const std::vector<double> av{0.0, 0.25, 0.5, 1.0};
        const std::vector<SchemeKind> ma{SchemeKind::Proposed, SchemeKind::MaPso};
        std::string ad;
        const bool a_ok = trend(run_sweep(asc, SweepAxis::RegionSize, av, ma), av, ma, false, ad);

        detail += std::string("K ") + (k_ok ? "ok" : "FAIL") + ", R " + (r_ok ? "ok" : "FAIL") + ", distance " +
                  (d_ok ? "ok" : "FAIL") + ", A^r " + (a_ok ? "ok" : "FAIL");
        report(4, order && k_ok && r_ok && d_ok && a_ok, detail);
        std::printf("  K sweep (N=6, R=1): %s\n  R sweep: %s\n  distance sweep: %s\n  A^r sweep (A^t=4 wl, R=5): %s\n",
                    kd.c_str(), rd.c_str(), dd.c_str(), ad.c_str());
    }

    {
        const auto bf = oracle::validate_beamforming(1, 100);
        std::string detail;
        bool pass = true;
        for (const char *name : {"duality vs conic oracle on random instances", "single-user MRT closed form",
                                 "SINR constraints active at optimum"})
        {
            const auto *c = find_check(bf, name);
            pass = pass && c && c->passed;
            detail += std::string(name) + ": " + (c ? c->detail : "missing") + "; ";
        }
        report(5, pass, detail);
    }

    {
        const auto opt = oracle::validate_optimizer(1, 10);
        const auto *c = find_check(opt, "tiny instance against grid optimum");
        report(6, c && c->passed, c ? c->detail : "check missing");
    }

    {
        const auto ch = oracle::validate_channel(1);
        std::string detail;
        for (const auto &c : ch.checks)
            detail += c.name + ": " + c.detail + "; ";
        report(7, ch.passed(), detail);
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int failed = 0;
    for (const auto &l : lines)
        failed += l.pass ? 0 : 1;
    std::printf("acceptance: %d/%zu criteria passed in %.1f s\n", static_cast<int>(lines.size()) - failed,
                lines.size(), secs);
    return failed == 0 ? 0 : 1;
}
